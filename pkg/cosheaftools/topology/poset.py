"""
Finite posets and their Alexandroff topology.

Open sets are the up-closed subsets of the poset: the smallest open set
containing x is ``U_x = {y : y >= x}``. Cosheaf structure maps are attached to
covering pairs and run from the upper element to the lower one, so x is the
terminal object of the diagram restricted to U_x.

Membership is stored as an integer bitmask over the element order fixed at
validation time; that order breaks every tie downstream (generator order,
Cech indices, chain orientation).
"""
import logging
from collections import OrderedDict

from cosheaftools.common.exceptions import (
    OpenLatticeTooLarge,
    OpenSetException,
    PosetException,
)

log = logging.getLogger(__name__)

DEFAULT_OPEN_CAP = 4096


class FinPoset:
    """A validated finite poset. Build instances with :func:`validate_poset`."""

    def __init__(self, elements, hasse, up_masks):
        self.elements = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        self.hasse = frozenset(hasse)
        self._up = tuple(up_masks)
        self.upper_covers = OrderedDict((x, []) for x in self.elements)
        self.lower_covers = OrderedDict((x, []) for x in self.elements)
        for upper, lower in sorted(
            self.hasse, key=lambda p: (self.index[p[1]], self.index[p[0]])
        ):
            self.upper_covers[lower].append(upper)
            self.lower_covers[upper].append(lower)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __repr__(self):
        return 'FinPoset({0} elements, {1} covering pairs)'.format(
            len(self.elements), len(self.hasse)
        )

    def same_order(self, other):
        """True when both posets have the same elements and covering pairs."""
        return (
            set(self.elements) == set(other.elements) and
            self.hasse == other.hasse
        )

    def position(self, x):
        try:
            return self.index[x]
        except KeyError:
            raise PosetException('Unknown poset element {0!r}'.format(x))

    def bit(self, x):
        return 1 << self.position(x)

    def up_mask(self, x):
        return self._up[self.position(x)]

    def leq(self, x, y):
        """x <= y"""
        return bool(self.up_mask(x) & self.bit(y))

    def less(self, x, y):
        return x != y and self.leq(x, y)

    def members(self, mask):
        return [x for i, x in enumerate(self.elements) if mask >> i & 1]

    def mask_of(self, members):
        mask = 0
        for x in members:
            mask |= self.bit(x)
        return mask

    def is_up_closed(self, mask):
        return all(
            self._up[i] & mask == self._up[i]
            for i in range(len(self.elements)) if mask >> i & 1
        )

    def minimal_elements(self):
        return [x for x in self.elements if not self.lower_covers[x]]

    def maximal_elements(self):
        return [x for x in self.elements if not self.upper_covers[x]]

    def linear_extension(self):
        """Elements listed bottom to top, ties broken by element order."""
        return sorted(
            self.elements,
            key=lambda x: (bin(self.down_mask(x)).count('1'), self.index[x])
        )

    def down_mask(self, x):
        bit = self.bit(x)
        mask = 0
        for i, up in enumerate(self._up):
            if up & bit:
                mask |= 1 << i
        return mask

    def dimension(self):
        """Length of the longest chain minus one (-1 for the empty poset)."""
        height = {}
        for x in reversed(self.linear_extension()):
            height[x] = 1 + max(
                (height[y] for y in self.upper_covers[x]), default=0
            )
        return max(height.values(), default=0) - 1

    def whole(self):
        return OpenSet(self, (1 << len(self.elements)) - 1)

    def empty(self):
        return OpenSet(self, 0)


class OpenSet:
    """An up-closed subset of a :class:`FinPoset`."""
    __slots__ = ('poset', 'mask')

    def __init__(self, poset, mask):
        self.poset = poset
        self.mask = mask

    @classmethod
    def from_members(cls, poset, members):
        mask = poset.mask_of(members)
        if not poset.is_up_closed(mask):
            raise OpenSetException(
                '{0} is not an open (up-closed) set'.format(sorted(members))
            )
        return cls(poset, mask)

    def __eq__(self, other):
        if not isinstance(other, OpenSet):
            return NotImplemented
        return self.poset is other.poset and self.mask == other.mask

    def __hash__(self):
        return hash(self.mask)

    def __len__(self):
        return bin(self.mask).count('1')

    def __bool__(self):
        return self.mask != 0

    def __contains__(self, x):
        return x in self.poset.index and bool(self.mask & self.poset.bit(x))

    def __iter__(self):
        return iter(self.poset.members(self.mask))

    def __le__(self, other):
        _check_ambient(self, other)
        return self.mask & other.mask == self.mask

    def __lt__(self, other):
        return self <= other and self.mask != other.mask

    def __repr__(self):
        return 'OpenSet({0})'.format(
            '{' + ', '.join(self.poset.members(self.mask)) + '}'
        )

    @property
    def members(self):
        return self.poset.members(self.mask)

    def addable(self, within):
        """Elements z of *within* outside this set such that self + {z} is
        still open, i.e. every element strictly above z is already here."""
        poset = self.poset
        result = []
        for z in within.members:
            above = poset.up_mask(z) & ~poset.bit(z)
            if z not in self and above & self.mask == above:
                result.append(z)
        return result

    def with_element(self, z):
        return OpenSet(self.poset, self.mask | self.poset.bit(z))


def _check_ambient(U, V):
    if U.poset is not V.poset:
        raise OpenSetException('Open sets belong to different posets')


def intersect(U, V):
    _check_ambient(U, V)
    return OpenSet(U.poset, U.mask & V.mask)


def union(U, V):
    _check_ambient(U, V)
    return OpenSet(U.poset, U.mask | V.mask)


def principal_open(P, x):
    """The smallest open set containing x: every y >= x."""
    if x not in P:
        raise PosetException('Unknown poset element {0!r}'.format(x))
    return OpenSet(P, P.up_mask(x))


def _topological_order(elements, lower_covers):
    """Kahn's algorithm over the upper -> lower arrows; returns the elements
    top to bottom or raises on a cycle."""
    indegree = {x: 0 for x in elements}
    for x in elements:
        for lower in lower_covers[x]:
            indegree[lower] += 1
    ready = [x for x in elements if indegree[x] == 0]
    order = []
    while ready:
        x = ready.pop(0)
        order.append(x)
        for lower in lower_covers[x]:
            indegree[lower] -= 1
            if indegree[lower] == 0:
                ready.append(lower)
    if len(order) != len(elements):
        stuck = [x for x in elements if indegree[x] > 0]
        raise PosetException(
            'Cycle detected in the covering relation among {0}'.format(stuck)
        )
    return order


def validate_poset(elements, hasse):
    """
    Validate a poset given by its elements and covering pairs
    (upper, lower). Pairs implied by transitivity are dropped with a warning.
    """
    elements = list(elements)
    seen = set()
    for x in elements:
        if x in seen:
            raise PosetException('Duplicate element identifier {0!r}'.format(x))
        seen.add(x)
    pairs = []
    known = set()
    for pair in hasse:
        upper, lower = pair
        for x in (upper, lower):
            if x not in seen:
                raise PosetException(
                    'Covering pair {0!r}>{1!r} references unknown element '
                    '{2!r}'.format(upper, lower, x)
                )
        if upper == lower:
            raise PosetException(
                'Element {0!r} cannot cover itself'.format(upper)
            )
        if (upper, lower) not in known:
            known.add((upper, lower))
            pairs.append((upper, lower))
    lower_covers = {x: [] for x in elements}
    upper_covers = {x: [] for x in elements}
    for upper, lower in pairs:
        lower_covers[upper].append(lower)
        upper_covers[lower].append(upper)
    order = _topological_order(elements, lower_covers)
    index = {x: i for i, x in enumerate(elements)}
    up = {}
    for x in order:
        mask = 1 << index[x]
        for upper in upper_covers[x]:
            mask |= up[upper]
        up[x] = mask
    reduced = []
    for upper, lower in pairs:
        others = [u for u in upper_covers[lower] if u != upper]
        if any(up[u] & (1 << index[upper]) for u in others):
            log.warning(
                'Dropping covering pair {0}>{1}: it is implied by '
                'transitivity'.format(upper, lower)
            )
            continue
        reduced.append((upper, lower))
    poset = FinPoset(elements, reduced, [up[x] for x in elements])
    if len(set(poset._up)) != len(elements):
        raise PosetException('Distinct elements share a principal open set')
    log.debug('Validated {0}'.format(poset))
    return poset


def enumerate_opens(P, cap=DEFAULT_OPEN_CAP):
    """
    Return every open set of P. Elements are decided top-down, so an element
    may only join once all its upper covers have.
    """
    order = list(reversed(P.linear_extension()))
    opens = []

    def extend(position, mask):
        if position == len(order):
            opens.append(OpenSet(P, mask))
            if len(opens) > cap:
                raise OpenLatticeTooLarge(
                    'Open lattice has more than {0} members'.format(cap)
                )
            return
        x = order[position]
        extend(position + 1, mask)
        if all(mask & P.bit(y) for y in P.upper_covers[x]):
            extend(position + 1, mask | P.bit(x))

    extend(0, 0)
    opens.sort(key=lambda U: (len(U), U.mask))
    return opens


class Cover:
    """An indexed family of open sets whose union is *universe*."""

    def __init__(self, opens, universe=None):
        self.opens = tuple(opens)
        if not self.opens and universe is None:
            raise OpenSetException('An empty cover needs an explicit universe')
        poset = (universe if universe is not None else self.opens[0]).poset
        joined = OpenSet(poset, 0)
        for U in self.opens:
            joined = union(joined, U)
        if universe is None:
            universe = joined
        for U in self.opens:
            if not U <= universe:
                raise OpenSetException(
                    '{0} is not contained in {1}'.format(U, universe)
                )
        if joined != universe:
            raise OpenSetException(
                'Cover union {0} does not equal {1}'.format(joined, universe)
            )
        self.universe = universe

    def __len__(self):
        return len(self.opens)

    def __repr__(self):
        return 'Cover({0})'.format(list(self.opens))


def nerve_intersections(cover):
    """
    All strictly increasing index tuples with nonempty intersection, paired
    with that intersection, ordered by length then lexicographically.
    """
    result = []

    def extend(indices, current):
        for k in range(indices[-1] + 1, len(cover.opens)):
            meet = intersect(current, cover.opens[k])
            if meet:
                result.append((indices + (k,), meet))
                extend(indices + (k,), meet)

    for k, U in enumerate(cover.opens):
        if U:
            result.append(((k,), U))
            extend((k,), U)
    result.sort(key=lambda item: (len(item[0]), item[0]))
    return result


def subposet(P, members):
    """The induced order on *members*, keeping P's element order."""
    chosen = [x for x in P.elements if x in set(members)]
    pairs = []
    for lower in chosen:
        above = [u for u in chosen if P.less(lower, u)]
        for upper in above:
            if not any(
                P.less(lower, w) and P.less(w, upper) for w in above
            ):
                pairs.append((upper, lower))
    return validate_poset(chosen, pairs)
