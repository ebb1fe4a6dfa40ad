"""cbound: braids, link diagrams, HOMFLY, oval forests and splice diagrams.

A workbench for deciding which links bound pieces of algebraic curves in
smoothly embedded 4-balls.  The package computes the classical obstruction
toolkit (HOMFLY skein polynomial, linking matrices, Seifert forms and
signatures, slice Euler characteristic bounds), compiles nested-oval data
into cabling programs and splice diagrams, and cross-checks the symbolic
pipeline against a numeric curves-on-the-3-sphere oracle.
"""

__version__ = "0.1.0"
