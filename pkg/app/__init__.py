"""hdx-fourier: Boolean function analysis on weighted simplicial complexes"""
