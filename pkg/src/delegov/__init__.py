"""Private proxy voting with homomorphic tallying.

Voters delegate voting power in encrypted form inside an anonymity set,
delegates vote publicly or privately, and a trusted authority decrypts the
homomorphic tallies with a proof of correct decryption.  An executable ideal
functionality doubles as a differential-testing oracle for the whole stack.
"""

__version__ = "0.1.0"
