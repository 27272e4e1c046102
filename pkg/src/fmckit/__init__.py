"""Exact computations on Fulton-MacPherson configuration spaces X[n].

Modules:

``exact``        rationals, exact linear algebra, subsets, permutations
``blowup``       blow-up schedules, Picard numbers, discrepancies
``chow``         the Chow ring of (P^1)^n
``cones``        polyhedral cones with a divisor/curve pairing
``stablemaps``   degree-1 stable maps to P^1 as marked trees
``fibrations``   pencils and forgetful factorizations
``autgroups``    automorphism group structures and brute-force checks
``cli``          the ``fmckit`` command
"""

__version__ = "0.1.0"
