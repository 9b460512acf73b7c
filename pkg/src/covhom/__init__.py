"""Homology of cyclic covers, Alexander-module Jordan structure, Massey products and Aomoto bounds."""
