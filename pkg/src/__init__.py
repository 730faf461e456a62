# SympOrtho: Basmajian-type identities for maximal representations into Sp(2n,R)
__version__ = "0.1.0"
