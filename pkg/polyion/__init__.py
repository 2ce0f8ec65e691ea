"""
polyion

Readout and preparation of the rotational state of a trapped polyatomic
molecular ion through state-dependent optical forces and co-trapped atomic
ion thermometry.
"""

__version__ = "0.1.0"
