"""sl(n) Khovanov-Rozansky link homology from planar arc diagrams.

Layers, bottom to top:

- polyring:  exact graded polynomials over Q
- planar:    resolved diagrams, tangles, the gluing operad, braid action
- mf:        matrix factorizations of the boundary potentials
- mfmorph:   morphisms, chain conditions, Ext slices, homotopy solving
- relations: cobordism generators and the local relation suite
- krcomplex: crossing complexes, cubes of resolutions, skein classes
- homology:  variable exclusion, MF homology, link homology, oracle
- cli:       command line front end (deterministic JSON reports)
"""

__version__ = "0.1.0"
