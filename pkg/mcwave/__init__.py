"""Multichannel orthonormal wavelet filter banks."""
