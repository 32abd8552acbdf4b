"""
Finitely generated abelian groups carried as relation presentations.

A group is ``Z^g / L`` where L is the column lattice of an integer relation
matrix with g rows. Homomorphisms are integer matrices acting on the left of
column vectors: column j of the matrix is the image of source generator j
written in target generators. Presentations are never normalised eagerly; the
canonical :class:`IsoClass` is only computed when groups are compared.
"""
import logging
from dataclasses import dataclass

from cosheaftools.algebra.linalg import (
    IntMatrix,
    snf,
    solve_integer,
    in_column_lattice,
    integer_kernel,
    lattice_basis,
)
from cosheaftools.common.exceptions import (
    BoundaryError,
    DimensionMismatch,
    EndpointMismatch,
    InternalConsistencyError,
    WellDefinednessError,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class IsoClass:
    """Free rank and invariant factors (each >= 2, dividing the next)."""
    free_rank: int
    torsion: tuple = ()

    @property
    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def to_record(self):
        # Large invariant factors are emitted as decimal strings.
        return {
            'rank': self.free_rank,
            'torsion': [str(d) for d in self.torsion],
        }

    @classmethod
    def from_record(cls, record):
        return cls(
            free_rank=int(record['rank']),
            torsion=tuple(int(d) for d in record.get('torsion', [])),
        )

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append('Z')
        elif self.free_rank > 1:
            parts.append('Z^{0}'.format(self.free_rank))
        parts.extend('Z/{0}'.format(d) for d in self.torsion)
        return ' x '.join(parts) if parts else '0'


@dataclass(frozen=True)
class AbGroup:
    """Z^gens modulo the column lattice of *relations* (gens rows)."""
    gens: int
    relations: IntMatrix

    def __post_init__(self):
        if self.relations.rows != self.gens:
            raise DimensionMismatch(
                'Relation matrix has {0} rows for {1} generators'.format(
                    self.relations.rows, self.gens
                )
            )

    @classmethod
    def free(cls, rank):
        return cls(rank, IntMatrix.zeros(rank, 0))

    @classmethod
    def trivial(cls):
        return cls.free(0)

    @classmethod
    def cyclic(cls, order):
        """Z/order, with order 0 meaning Z."""
        if order == 0:
            return cls.free(1)
        return cls(1, IntMatrix.from_rows([[order]]))

    @classmethod
    def from_invariants(cls, free_rank, torsion=()):
        torsion = list(torsion)
        gens = free_rank + len(torsion)
        columns = []
        for i, d in enumerate(torsion):
            col = [0] * gens
            col[free_rank + i] = d
            columns.append(col)
        return cls(gens, IntMatrix.from_columns(columns, gens))

    @property
    def n_relations(self):
        return self.relations.cols

    def __str__(self):
        return str(iso_class(self))


@dataclass(frozen=True)
class AbHom:
    """A homomorphism source -> target. Construct through :func:`make_hom`
    unless the matrix is well-defined by construction."""
    source: AbGroup
    target: AbGroup
    matrix: IntMatrix

    def apply(self, vector):
        return self.matrix.apply(vector)


def iso_class(group):
    """
    >>> iso_class(AbGroup(2, IntMatrix.from_rows([[2], [0]])))
    IsoClass(free_rank=1, torsion=(2,))
    >>> iso_class(AbGroup.free(3))
    IsoClass(free_rank=3, torsion=())
    """
    if group.gens == 0:
        return IsoClass(0, ())
    diagonal = snf(group.relations).diagonal
    nonzero = [d for d in diagonal if d != 0]
    return IsoClass(
        free_rank=group.gens - len(nonzero),
        torsion=tuple(d for d in nonzero if d > 1),
    )


def is_trivial(group):
    return iso_class(group).is_trivial


def make_hom(source, target, matrix):
    """
    Return a validated :class:`AbHom`. Every source relation must be carried
    into the target relation lattice; the first failing relation column is
    named in the raised :class:`WellDefinednessError`.
    """
    if matrix.shape != (target.gens, source.gens):
        raise DimensionMismatch(
            'Homomorphism matrix is {0}x{1}, expected {2}x{3}'.format(
                matrix.rows, matrix.cols, target.gens, source.gens
            )
        )
    for j in range(source.n_relations):
        image = matrix.apply(source.relations.column(j))
        if not in_column_lattice(target.relations, image):
            raise WellDefinednessError(
                'Relation column {0} of the source maps to {1}, which is not '
                'a relation of the target'.format(j, image),
                column=j
            )
    return AbHom(source, target, matrix)


def zero_hom(source, target):
    return AbHom(source, target, IntMatrix.zeros(target.gens, source.gens))


def identity_hom(group):
    return AbHom(group, group, IntMatrix.identity(group.gens))


def _check_endpoints(f, g):
    if f.source != g.source or f.target != g.target:
        raise EndpointMismatch(
            'Homomorphisms have different sources or targets'
        )


def maps_to_zero(f):
    """True iff every source generator lands in the target relation lattice."""
    relations = f.target.relations
    return all(
        in_column_lattice(relations, f.matrix.column(j))
        for j in range(f.matrix.cols)
    )


def hom_equal(f, g):
    """
    >>> z = AbGroup.free(1)
    >>> z2 = AbGroup.cyclic(2)
    >>> hom_equal(make_hom(z, z2, IntMatrix.from_rows([[1]])),
    ...           make_hom(z, z2, IntMatrix.from_rows([[3]])))
    True
    """
    _check_endpoints(f, g)
    return maps_to_zero(AbHom(f.source, f.target, f.matrix - g.matrix))


def compose(g, f):
    """Return g o f."""
    if f.target != g.source:
        raise EndpointMismatch(
            'Cannot compose: target of the first map is not the source of '
            'the second'
        )
    return AbHom(f.source, g.target, g.matrix @ f.matrix)


def add_homs(f, g):
    _check_endpoints(f, g)
    return AbHom(f.source, f.target, f.matrix + g.matrix)


def direct_sum(groups):
    """
    Return the block presentation of the direct sum and the list of
    injections, one per summand.
    """
    groups = list(groups)
    total = sum(G.gens for G in groups)
    relations = IntMatrix.block_diagonal([G.relations for G in groups])
    result = AbGroup(total, relations)
    injections = []
    offset = 0
    for G in groups:
        columns = []
        for j in range(G.gens):
            col = [0] * total
            col[offset + j] = 1
            columns.append(col)
        injections.append(
            AbHom(G, result, IntMatrix.from_columns(columns, total))
        )
        offset += G.gens
    return result, injections


def direct_sum_hom(maps, source=None, target=None):
    """Block diagonal homomorphism between two direct sums."""
    maps = list(maps)
    if source is None:
        source = direct_sum([f.source for f in maps])[0]
    if target is None:
        target = direct_sum([f.target for f in maps])[0]
    return AbHom(
        source, target, IntMatrix.block_diagonal([f.matrix for f in maps])
    )


def preimage_lattice(f):
    """
    Basis (as matrix columns) of {x in Z^n : f.matrix * x lies in the target
    relation lattice}. The source relations always belong to it.
    """
    n = f.source.gens
    if n == 0:
        return IntMatrix.zeros(0, 0)
    stacked = f.matrix.hstack(-f.target.relations)
    kernel = integer_kernel(stacked)
    projected = IntMatrix.from_columns(
        [col[:n] for col in kernel.columns()], n
    )
    return lattice_basis(projected)


def _coordinates(basis, vector, what):
    solution = solve_integer(basis, vector)
    if solution is None:
        raise InternalConsistencyError(
            '{0} {1} does not lie in the expected lattice'.format(what, vector)
        )
    return solution


def kernel(f):
    """
    Return (K, inclusion) with f o inclusion = 0 and universal among such.

    K is generated by a basis B of the preimage lattice; the source relations
    are rewritten in B-coordinates to become the relations of K.
    """
    basis = preimage_lattice(f)
    k = basis.cols
    relation_columns = [
        _coordinates(basis, f.source.relations.column(j), 'Source relation')
        for j in range(f.source.n_relations)
    ]
    K = AbGroup(k, IntMatrix.from_columns(relation_columns, k))
    inclusion = AbHom(K, f.source, basis)
    log.debug('Kernel of {0}x{1} map has {2} generators'.format(
        f.matrix.rows, f.matrix.cols, k
    ))
    return K, inclusion


def factor_through_kernel(f, h, kernel_pair=None):
    """
    Given h: H -> f.source with f o h = 0, return the unique map H -> ker(f)
    through which h factors. *kernel_pair* may pass a precomputed kernel.
    """
    K, inclusion = kernel_pair if kernel_pair is not None else kernel(f)
    columns = [
        _coordinates(inclusion.matrix, h.matrix.column(j), 'Image vector')
        for j in range(h.matrix.cols)
    ]
    return AbHom(h.source, K, IntMatrix.from_columns(columns, K.gens))


def cokernel(f):
    """Return (C, projection): target generators modulo target relations and
    the columns of f.matrix."""
    C = AbGroup(f.target.gens, f.target.relations.hstack(f.matrix))
    projection = AbHom(f.target, C, IntMatrix.identity(f.target.gens))
    return C, projection


def image(f):
    """
    Return (I, inclusion, corestriction) where I = source / ker(f),
    inclusion: I -> target has matrix f.matrix and corestriction: source -> I
    is the identity on generators.
    """
    basis = preimage_lattice(f)
    I = AbGroup(f.source.gens, basis)
    inclusion = AbHom(I, f.target, f.matrix)
    corestriction = AbHom(f.source, I, IntMatrix.identity(f.source.gens))
    return I, inclusion, corestriction


def is_isomorphism(f):
    K, _ = kernel(f)
    C, _ = cokernel(f)
    return is_trivial(K) and is_trivial(C)


def is_injective(f):
    return is_trivial(kernel(f)[0])


def homology_at(f, g):
    """
    Return the IsoClass of ker(g) / im(f) for A --f--> B --g--> C.

    >>> z = AbGroup.free(1)
    >>> twice = make_hom(z, z, IntMatrix.from_rows([[2]]))
    >>> str(homology_at(twice, zero_hom(z, AbGroup.trivial())))
    'Z/2'
    """
    if f.target != g.source:
        raise EndpointMismatch(
            'homology_at needs f.target == g.source'
        )
    if not maps_to_zero(compose(g, f)):
        raise BoundaryError('The composite g o f is not zero')
    K, inclusion = kernel(g)
    boundaries = factor_through_kernel(g, f, (K, inclusion))
    H, _ = cokernel(boundaries)
    return iso_class(H)


if __name__ == '__main__':
    import doctest
    doctest.testmod()
