"""Locating colorings of complete n-ary trees T(n, k)."""
