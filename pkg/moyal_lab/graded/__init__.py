"""ε-graded algebras: commutation factors, factor sets, graded matrix algebras, the Moyal superalgebra."""
