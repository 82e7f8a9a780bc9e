"""
Models package: matroids, matroidal Latin squares and their value types
"""
