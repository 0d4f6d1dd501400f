"""Spanning regular, highly connected subgraphs of dense graphs."""
