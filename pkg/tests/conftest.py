import pytest

from heckedist import equidist
from heckedist.supersingular import enumerate_locus, load_library

# fixed 30-prime sample below 3000 used by the structural/spectral checks
SAMPLE_PRIMES = (
    5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41,
    101, 151, 211, 251, 307, 401, 503, 601, 701, 809, 907,
    1009, 1201, 1409, 1601, 1801, 2003, 2411, 2999,
)

HECKE_LEVELS = (2, 3, 5, 7, 11, 13)


class MatrixStore:
    """Session-wide cache of loci and prime-level Hecke matrices."""

    def __init__(self, library):
        self.library = library
        self._loci = {}
        self._mats = {}

    def locus(self, p):
        if p not in self._loci:
            self._loci[p] = enumerate_locus(p)
        return self._loci[p]

    def matrices(self, p, levels=HECKE_LEVELS):
        levels = tuple(ell for ell in levels if ell != p)
        cached = self._mats.setdefault(p, {})
        missing = [ell for ell in levels if ell not in cached]
        if missing:
            cached.update(equidist.prime_matrices(self.locus(p), missing, self.library))
        return {ell: cached[ell] for ell in levels}


@pytest.fixture(scope="session")
def library():
    return load_library()


@pytest.fixture(scope="session")
def store(library):
    return MatrixStore(library)
