"""
Cellular cosheaves over finite posets.

A cellular cosheaf assigns an :class:`AbGroup` to every element and a
homomorphism to every covering pair, running from the upper element to the
lower one. Its values on open sets are colimits over the open set
(:func:`hat_eval`); by the costalk law the value on U_x is F(x) again.
"""
import logging

from cosheaftools.algebra.linalg import IntMatrix
from cosheaftools.algebra import groups as ab
from cosheaftools.algebra.groups import AbGroup, AbHom
from cosheaftools.common.exceptions import (
    EndpointMismatch,
    FunctorialityError,
    InputError,
    NaturalityError,
    OpenSetException,
    PosetException,
)
from cosheaftools.topology.poset import (
    DEFAULT_OPEN_CAP,
    OpenSet,
    enumerate_opens,
    subposet,
)

log = logging.getLogger(__name__)


class CellularCosheaf:
    """
    Groups per element and maps per covering pair (upper, lower). Use
    :func:`validate_cosheaf` for untrusted data; the constructor performs no
    checks.
    """

    def __init__(self, base, groups, maps):
        self.base = base
        self.groups = dict(groups)
        self.maps = dict(maps)
        self._between = {}
        self._colimits = {}

    def __repr__(self):
        return 'CellularCosheaf({0})'.format(', '.join(
            '{0}: {1}'.format(x, self.groups[x]) for x in self.base.elements
        ))

    def group_at(self, x):
        return self.groups[x]

    def map_on(self, upper, lower):
        return self.maps[(upper, lower)]

    def canonical_chain(self, upper, lower):
        """The chain upper > ... > lower that always steps to the first lower
        cover still above *lower*."""
        chain = [upper]
        while chain[-1] != lower:
            step = next(
                y for y in self.base.lower_covers[chain[-1]]
                if self.base.leq(lower, y)
            )
            chain.append(step)
        return chain

    def map_between(self, upper, lower):
        """The structure map F(upper) -> F(lower) for lower <= upper."""
        key = (upper, lower)
        if key in self._between:
            return self._between[key]
        if not self.base.leq(lower, upper):
            raise PosetException(
                '{0!r} is not below {1!r}'.format(lower, upper)
            )
        if upper == lower:
            result = ab.identity_hom(self.groups[upper])
        else:
            step = self.canonical_chain(upper, lower)[1]
            result = ab.compose(
                self.map_between(step, lower), self.maps[(upper, step)]
            )
        self._between[key] = result
        return result

    def colimit(self, members):
        """Cached :func:`colim_over` keyed by the member mask."""
        mask = self.base.mask_of(members)
        if mask not in self._colimits:
            self._colimits[mask] = _colimit(self, self.base.members(mask))
        return self._colimits[mask]


def _check_functoriality(F):
    """
    For every x < z and every lower cover y of z with y >= x, the composite
    through y must agree with the canonical composite. Induction on interval
    length turns these checks into path independence along all chains.
    """
    P = F.base
    checked = 0
    for z in P.elements:
        covers = P.lower_covers[z]
        if len(covers) < 2:
            continue
        for x in P.members(P.down_mask(z)):
            if x == z:
                continue
            routes = [y for y in covers if P.leq(x, y)]
            if len(routes) < 2:
                continue
            canonical = F.map_between(z, x)
            for y in routes[1:]:
                other = ab.compose(F.map_between(y, x), F.maps[(z, y)])
                checked += 1
                if not ab.hom_equal(canonical, other):
                    first = F.canonical_chain(z, x)
                    second = [z] + F.canonical_chain(y, x)
                    raise FunctorialityError(
                        'Structure maps from {0!r} down to {1!r} disagree '
                        'along {2} and {3}'.format(
                            z, x, ' > '.join(first), ' > '.join(second)
                        ),
                        lower=x, upper=z, chains=(first, second)
                    )
    log.debug('Checked {0} diamonds'.format(checked))


def validate_cosheaf(base, groups, maps):
    """
    Validate group and map data over *base*. Maps may be given as
    :class:`AbHom` instances or bare :class:`IntMatrix` objects.
    """
    groups = dict(groups)
    for x in base.elements:
        if x not in groups:
            raise InputError('No group given for element {0!r}'.format(x))
    for x in groups:
        if x not in base:
            raise PosetException(
                'Group given for unknown element {0!r}'.format(x)
            )
    checked = {}
    for pair in maps:
        if pair not in base.hasse:
            raise PosetException(
                'Map given for {0!r}>{1!r}, which is not a covering '
                'pair'.format(*pair)
            )
    for upper, lower in sorted(base.hasse):
        if (upper, lower) not in maps:
            raise InputError(
                'No map given for covering pair {0}>{1}'.format(upper, lower)
            )
        given = maps[(upper, lower)]
        source, target = groups[upper], groups[lower]
        if isinstance(given, AbHom):
            if given.source != source or given.target != target:
                raise EndpointMismatch(
                    'Map {0}>{1} does not run between the element '
                    'groups'.format(upper, lower)
                )
            given = given.matrix
        checked[(upper, lower)] = ab.make_hom(source, target, given)
    F = CellularCosheaf(base, groups, checked)
    _check_functoriality(F)
    return F


def constant_cosheaf(P, A):
    return CellularCosheaf(
        P,
        {x: A for x in P.elements},
        {pair: ab.identity_hom(A) for pair in P.hasse}
    )


def zero_cosheaf(P):
    return constant_cosheaf(P, AbGroup.trivial())


def skyscraper(P, x, A):
    """
    The representable cosheaf c_x(A): value A on every y <= x with identity
    maps, zero elsewhere. Its value on an open set U is A when x is in U and
    zero otherwise.
    """
    support = P.down_mask(x)
    zero = AbGroup.trivial()
    groups = {
        y: A if support & P.bit(y) else zero for y in P.elements
    }
    maps = {}
    for upper, lower in P.hasse:
        if support & P.bit(upper):
            maps[(upper, lower)] = ab.identity_hom(A)
        else:
            maps[(upper, lower)] = ab.zero_hom(groups[upper], groups[lower])
    return CellularCosheaf(P, groups, maps)


def cosheaf_direct_sum(cosheaves, base=None):
    """Pointwise direct sum; structure maps are block diagonal."""
    cosheaves = list(cosheaves)
    if base is None:
        if not cosheaves:
            raise InputError('Direct sum of no cosheaves needs a base')
        base = cosheaves[0].base
    for F in cosheaves:
        if F.base is not base:
            raise PosetException('Summands live on different posets')
    groups = {
        x: ab.direct_sum([F.groups[x] for F in cosheaves])[0]
        for x in base.elements
    }
    maps = {
        (u, l): ab.direct_sum_hom(
            [F.maps[(u, l)] for F in cosheaves], groups[u], groups[l]
        )
        for u, l in base.hasse
    }
    return CellularCosheaf(base, groups, maps)


def _colimit(F, members):
    blocks = [F.groups[x] for x in members]
    total, injections = ab.direct_sum(blocks)
    inject = dict(zip(members, injections))
    inside = set(members)
    extra = []
    for upper, lower in sorted(F.base.hasse):
        if upper not in inside or lower not in inside:
            continue
        structure = F.maps[(upper, lower)].matrix
        iu, il = inject[upper].matrix, inject[lower].matrix
        for j in range(F.groups[upper].gens):
            low = il.apply(structure.column(j))
            up = iu.column(j)
            extra.append([a - b for a, b in zip(low, up)])
    relations = total.relations.hstack(
        IntMatrix.from_columns(extra, total.gens)
    )
    G = AbGroup(total.gens, relations)
    injections = {
        x: AbHom(F.groups[x], G, inject[x].matrix) for x in members
    }
    return G, injections


def colim_over(F, members):
    """
    Colimit of F over the given elements: the direct sum of their groups
    with g identified with its image for every covering pair inside. Returns
    the group and the cocone injections keyed by element.
    """
    members = [x for x in F.base.elements if x in set(members)]
    return F.colimit(members)


def _check_open(F, U):
    """
    Return U as an open set of F.base. Open sets of an equal poset built
    separately (e.g. a second face_poset of the same complex) are rebased.
    """
    if not isinstance(U, OpenSet):
        raise OpenSetException('Expected an open set of the cosheaf base')
    if U.poset is not F.base:
        if not F.base.same_order(U.poset):
            raise OpenSetException('Expected an open set of the cosheaf base')
        U = OpenSet(F.base, F.base.mask_of(U.members))
    if not F.base.is_up_closed(U.mask):
        raise OpenSetException('{0} is not up-closed'.format(U))
    return U


def hat_eval(F, U):
    """The value of the associated cosheaf on the open set U."""
    U = _check_open(F, U)
    return F.colimit(U.members)[0]


def hat_extension(F, V, U):
    """The extension map F(V) -> F(U) for open sets V <= U."""
    V = _check_open(F, V)
    U = _check_open(F, U)
    if not V <= U:
        raise OpenSetException('{0} is not contained in {1}'.format(V, U))
    source, _ = F.colimit(V.members)
    target, injections = F.colimit(U.members)
    columns = []
    for x in V.members:
        columns.extend(injections[x].matrix.columns())
    return AbHom(source, target, IntMatrix.from_columns(columns, target.gens))


def restrict(F, members):
    """The cellular cosheaf on the induced subposet spanned by *members*."""
    Q = subposet(F.base, members)
    return CellularCosheaf(
        Q,
        {x: F.groups[x] for x in Q.elements},
        {(u, l): F.map_between(u, l) for u, l in Q.hasse}
    )


class NatTrans:
    """A natural transformation given by its components on elements."""

    def __init__(self, source, target, components):
        self.source = source
        self.target = target
        self.components = dict(components)

    def component_at(self, x):
        return self.components[x]


def validate_natural_transformation(source, target, components):
    if source.base is not target.base:
        raise PosetException('Natural transformation between different bases')
    checked = {}
    for x in source.base.elements:
        if x not in components:
            raise InputError('No component given at {0!r}'.format(x))
        given = components[x]
        matrix = given.matrix if isinstance(given, AbHom) else given
        checked[x] = ab.make_hom(source.groups[x], target.groups[x], matrix)
    for upper, lower in sorted(source.base.hasse):
        left = ab.compose(target.maps[(upper, lower)], checked[upper])
        right = ab.compose(checked[lower], source.maps[(upper, lower)])
        if not ab.hom_equal(left, right):
            raise NaturalityError(
                'Naturality square for {0}>{1} does not commute'.format(
                    upper, lower
                )
            )
    return NatTrans(source, target, checked)


def compose_transformations(beta, alpha):
    """beta o alpha, componentwise."""
    return NatTrans(alpha.source, beta.target, {
        x: ab.compose(beta.components[x], alpha.components[x])
        for x in alpha.source.base.elements
    })


def induced_on_colimit(alpha, members):
    """The map colim source -> colim target induced over *members*."""
    members = [x for x in alpha.source.base.elements if x in set(members)]
    source, _ = alpha.source.colimit(members)
    target, _ = alpha.target.colimit(members)
    return ab.direct_sum_hom(
        [alpha.components[x] for x in members], source, target
    )


def kernel_functor(alpha):
    """
    Pointwise kernels of alpha with the induced structure maps. Returns the
    kernel cosheaf and its inclusion into alpha.source.
    """
    base = alpha.source.base
    kernels = {x: ab.kernel(alpha.components[x]) for x in base.elements}
    maps = {}
    for upper, lower in base.hasse:
        K_up, inc_up = kernels[upper]
        h = ab.compose(alpha.source.maps[(upper, lower)], inc_up)
        maps[(upper, lower)] = ab.factor_through_kernel(
            alpha.components[lower], h, kernels[lower]
        )
    groups = {x: kernels[x][0] for x in base.elements}
    K = validate_cosheaf(base, groups, maps)
    inclusion = NatTrans(K, alpha.source, {
        x: kernels[x][1] for x in base.elements
    })
    return K, inclusion


def cokernel_functor(alpha):
    """Pointwise cokernels of alpha; the target structure maps descend."""
    base = alpha.source.base
    cokernels = {x: ab.cokernel(alpha.components[x]) for x in base.elements}
    groups = {x: cokernels[x][0] for x in base.elements}
    maps = {
        (u, l): alpha.target.maps[(u, l)].matrix for u, l in base.hasse
    }
    C = validate_cosheaf(base, groups, maps)
    projection = NatTrans(alpha.target, C, {
        x: cokernels[x][1] for x in base.elements
    })
    return C, projection


def is_flasque(F, cap=DEFAULT_OPEN_CAP):
    """
    True iff every extension map between open sets is injective. It is
    enough to test V < V + {z}: every inclusion factors through such steps.
    """
    for U in enumerate_opens(F.base, cap):
        for z in U.members:
            V = OpenSet(F.base, U.mask & ~F.base.bit(z))
            if not F.base.is_up_closed(V.mask):
                continue
            if not ab.is_injective(hat_extension(F, V, U)):
                log.debug('Extension {0} -> {1} is not injective'.format(
                    V, U
                ))
                return False
    return True
