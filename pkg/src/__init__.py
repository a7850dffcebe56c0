# Coauthor PageRank toolkit
