import itertools
import logging

from cosheaftools.common.exceptions import PosetException
from cosheaftools.topology.poset import validate_poset

log = logging.getLogger(__name__)

# Simplex names join vertex names with this separator. Order complexes join
# the elements of a chain with CHAIN_SEPARATOR instead, since face poset
# names already contain commas.
SIMPLEX_SEPARATOR = ','
CHAIN_SEPARATOR = '<'
ESCAPE = '\\'


class SimplicialComplex:
    """
    A finite abstract simplicial complex on an ordered vertex set. Simplices
    are tuples of vertices listed in vertex order; the order fixes the
    incidence signs used by boundary maps.
    """

    def __init__(self, vertices, simplices, separator=SIMPLEX_SEPARATOR,
                 escaped=False):
        self.vertices = tuple(vertices)
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self.separator = separator
        self.escaped = escaped
        self.simplices = frozenset(simplices)
        self._by_dim = {}
        for sigma in sorted(self.simplices, key=self._sort_key):
            self._by_dim.setdefault(len(sigma) - 1, []).append(sigma)

    @classmethod
    def closure(cls, vertices, simplices, separator=SIMPLEX_SEPARATOR):
        """
        Build the complex generated by *simplices*, adding every nonempty
        face and every vertex as a 0-simplex.
        """
        vertices = list(vertices)
        if len(set(vertices)) != len(vertices):
            raise PosetException('Duplicate vertex identifiers')
        index = {v: i for i, v in enumerate(vertices)}
        closed = set((v,) for v in vertices)
        for simplex in simplices:
            simplex = list(simplex)
            if not simplex:
                raise PosetException('Empty simplex in simplex list')
            for v in simplex:
                if v not in index:
                    raise PosetException(
                        'Simplex {0} uses unknown vertex {1!r}'.format(
                            simplex, v
                        )
                    )
            if len(set(simplex)) != len(simplex):
                raise PosetException(
                    'Simplex {0} repeats a vertex'.format(simplex)
                )
            ordered = sorted(simplex, key=index.__getitem__)
            for size in range(1, len(ordered) + 1):
                closed.update(itertools.combinations(ordered, size))
        return cls(vertices, closed, separator)

    def _sort_key(self, sigma):
        return (len(sigma), [self.vertex_index[v] for v in sigma])

    @property
    def dimension(self):
        return max(self._by_dim, default=-1)

    def simplices_of_dim(self, n):
        return list(self._by_dim.get(n, []))

    def ordered_simplices(self):
        return sorted(self.simplices, key=self._sort_key)

    def name(self, sigma):
        if self.escaped:
            sigma = [
                v.replace(ESCAPE, ESCAPE * 2).replace(
                    self.separator, ESCAPE + self.separator
                )
                for v in sigma
            ]
        return self.separator.join(sigma)

    def faces(self, sigma):
        """Codimension-one faces paired with the index of the omitted
        vertex."""
        if len(sigma) == 1:
            return []
        return [(i, sigma[:i] + sigma[i + 1:]) for i in range(len(sigma))]

    def __repr__(self):
        return 'SimplicialComplex({0} vertices, {1} simplices)'.format(
            len(self.vertices), len(self.simplices)
        )


def face_poset(K):
    """
    The face poset of K: sigma <= tau iff sigma is a face of tau. Each
    simplex covers its codimension-one faces, so the principal open set of a
    simplex is its open star.
    """
    simplices = K.ordered_simplices()
    hasse = [
        (K.name(sigma), K.name(face))
        for sigma in simplices
        for _, face in K.faces(sigma)
    ]
    return validate_poset([K.name(s) for s in simplices], hasse)


def simplex_lookup(K):
    """Map face poset element names back to simplices."""
    return {K.name(s): s for s in K.simplices}


def order_complex(P):
    """
    The simplicial complex whose simplices are the chains of P. Vertices are
    listed along a linear extension so every simplex reads bottom to top.
    Chain names escape backslashes and separators inside element names, so
    distinct chains always get distinct names.
    """
    vertices = P.linear_extension()
    chains = []

    def extend(chain):
        chains.append(tuple(chain))
        top = chain[-1]
        for y in vertices:
            if P.less(top, y):
                extend(chain + [y])

    for x in vertices:
        extend([x])
    log.debug('Order complex of {0} has {1} chains'.format(P, len(chains)))
    return SimplicialComplex(vertices, chains, CHAIN_SEPARATOR, escaped=True)
