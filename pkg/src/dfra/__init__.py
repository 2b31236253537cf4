"""Verification toolkit for the DFRA extended noncommutative phase space.

Subpackages:
  symcore     exact noncommutative polynomial engine and bracket tables
  algebra     the DFRA commutator algebra, J/X/M operators, quantum conditions
  constraints classical phase space, constraint matrices, Dirac brackets
  reps        extended-Poincare representation matrices and Casimirs
  oscillator  two-sector harmonic oscillator spectrum and Gaussian moments
  clifford    D=10 gamma matrices, spinor generators, generalized Dirac operator
  field       scalar field on (x, theta): lattice dynamics, Green's functions,
              Noether charges, Moyal star product
  cli         command-line verification suites and expression evaluator
"""

__version__ = "0.1.0"
