# Test package for the coauthor PageRank toolkit
