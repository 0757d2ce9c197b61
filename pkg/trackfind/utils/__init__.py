"""Geometry, models, generation, file formats, benchmarking and plotting helpers"""
