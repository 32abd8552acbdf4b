"""
Precosheaves given as tables of values on open sets, the cosheaf axiom and
cosheafification.

A :class:`PrecosheafTable` may be partial: it only needs the open sets a
computation touches. Extensions that are not stored are composed from stored
one-step extensions on demand.
"""
import logging

from cosheaftools.algebra.linalg import IntMatrix
from cosheaftools.algebra import groups as ab
from cosheaftools.algebra.groups import AbGroup, AbHom
from cosheaftools.common.exceptions import (
    EndpointMismatch,
    FunctorialityError,
    MissingTableEntry,
    OpenSetException,
)
from cosheaftools.core.cosheaf import (
    hat_eval,
    hat_extension,
    induced_on_colimit,
    validate_cosheaf,
)
from cosheaftools.topology.poset import (
    DEFAULT_OPEN_CAP,
    enumerate_opens,
    nerve_intersections,
    principal_open,
)

log = logging.getLogger(__name__)


class PrecosheafTable:
    """Values on open sets and extension maps for inclusions V <= U."""

    def __init__(self, base, values, extensions):
        self.base = base
        self.values = dict(values)
        self.extensions = dict(extensions)
        self._composed = {}

    def value(self, U):
        try:
            return self.values[U]
        except KeyError:
            raise MissingTableEntry('No table value on {0}'.format(U))

    def extension(self, V, U):
        """The extension map T(V) -> T(U), composed through stored
        one-step extensions when the pair itself is not stored."""
        if (V, U) in self.extensions:
            return self.extensions[(V, U)]
        if (V, U) in self._composed:
            return self._composed[(V, U)]
        if not V <= U:
            raise OpenSetException('{0} is not contained in {1}'.format(V, U))
        if V == U:
            result = ab.identity_hom(self.value(U))
        else:
            result = None
            for z in V.addable(U):
                W = V.with_element(z)
                if (V, W) in self.extensions:
                    result = ab.compose(
                        self.extension(W, U), self.extensions[(V, W)]
                    )
                    break
            if result is None:
                raise MissingTableEntry(
                    'No extension stored from {0} towards {1}'.format(V, U)
                )
        self._composed[(V, U)] = result
        return result


def validate_table(table):
    """
    Check endpoints, identities and composition on every stored triple
    W <= V <= U.
    """
    for (V, U), f in table.extensions.items():
        if f.source != table.value(V) or f.target != table.value(U):
            raise EndpointMismatch(
                'Extension {0} -> {1} has wrong endpoints'.format(V, U)
            )
        if V == U and not ab.hom_equal(f, ab.identity_hom(table.value(U))):
            raise FunctorialityError(
                'Extension of {0} to itself is not the identity'.format(U)
            )
    stored = list(table.extensions)
    for W, V in stored:
        for V2, U in stored:
            if V2 != V or (W, U) not in table.extensions:
                continue
            composite = ab.compose(
                table.extensions[(V, U)], table.extensions[(W, V)]
            )
            if not ab.hom_equal(composite, table.extensions[(W, U)]):
                raise FunctorialityError(
                    'Extensions {0} -> {1} -> {2} do not compose'.format(
                        W, V, U
                    ),
                    chains=([W, V, U], [W, U])
                )
    return table


def _one_step_pairs(opens):
    known = set(opens)
    for V in opens:
        for z in V.addable(V.poset.whole()):
            W = V.with_element(z)
            if W in known:
                yield V, W


def table_from_cosheaf(F, opens=None, cap=DEFAULT_OPEN_CAP):
    """The table U -> hat_eval(F, U) on *opens* (default: every open)."""
    if opens is None:
        opens = enumerate_opens(F.base, cap)
    values = {U: hat_eval(F, U) for U in opens}
    extensions = {
        (V, W): hat_extension(F, V, W) for V, W in _one_step_pairs(opens)
    }
    return PrecosheafTable(F.base, values, extensions)


def kernel_table(alpha, opens=None, cap=DEFAULT_OPEN_CAP):
    """
    The precosheaf U -> ker(alpha(U)) of open-set kernels, where alpha(U) is
    induced on colimits. This is generally not a cosheaf.
    """
    if opens is None:
        opens = enumerate_opens(alpha.source.base, cap)
    kernels = {
        U: ab.kernel(induced_on_colimit(alpha, U.members)) for U in opens
    }
    extensions = {}
    for V, W in _one_step_pairs(opens):
        h = ab.compose(
            hat_extension(alpha.source, V, W), kernels[V][1]
        )
        extensions[(V, W)] = ab.factor_through_kernel(
            induced_on_colimit(alpha, W.members), h, kernels[W]
        )
    values = {U: kernels[U][0] for U in opens}
    return PrecosheafTable(alpha.source.base, values, extensions)


def _distinct_intersections(cover):
    opens = []
    for _, W in nerve_intersections(cover):
        if W not in opens:
            opens.append(W)
    return opens


def nerve_colimit(table, cover):
    """
    Colimit of the table over the nonempty intersections of cover members,
    ordered by inclusion. Returns the group and the injections keyed by
    intersection.
    """
    opens = _distinct_intersections(cover)
    summands = [table.value(W) for W in opens]
    total, injections = ab.direct_sum(summands)
    inject = dict(zip(opens, injections))
    extra = []
    for W in opens:
        above = [X for X in opens if W < X]
        for X in above:
            if any(W < Y and Y < X for Y in above):
                continue
            ext = table.extension(W, X)
            for j in range(table.value(W).gens):
                low = inject[X].matrix.apply(ext.matrix.column(j))
                up = inject[W].matrix.column(j)
                extra.append([a - b for a, b in zip(low, up)])
    relations = total.relations.hstack(
        IntMatrix.from_columns(extra, total.gens)
    )
    G = AbGroup(total.gens, relations)
    return G, {
        W: AbHom(table.value(W), G, inject[W].matrix) for W in opens
    }


def cosheaf_axiom_check(table, U, cover):
    """
    True iff the canonical map from the nerve colimit of the cover to T(U) is
    an isomorphism.
    """
    if cover.universe != U:
        raise OpenSetException('Cover does not cover {0}'.format(U))
    colimit, injections = nerve_colimit(table, cover)
    target = table.value(U)
    columns = []
    for W in injections:
        columns.extend(table.extension(W, U).matrix.columns())
    canonical = ab.make_hom(
        colimit, target, IntMatrix.from_columns(columns, target.gens)
    )
    result = ab.is_isomorphism(canonical)
    log.debug(
        'Cosheaf axiom on {0}: nerve colimit {1}, value {2}: {3}'.format(
            U, colimit, target, result
        )
    )
    return result


def cosheafify(table):
    """
    The cellular cosheaf x -> T(U_x) with maps T(U_y <= U_x) for y covering
    x; its values on open sets (via hat_eval) form the cosheafification.
    """
    P = table.base
    principal = {x: principal_open(P, x) for x in P.elements}
    groups = {x: table.value(principal[x]) for x in P.elements}
    maps = {
        (y, x): table.extension(principal[y], principal[x])
        for y, x in P.hasse
    }
    return validate_cosheaf(P, groups, maps)


def comparison_map(table, U, plus=None):
    """
    The canonical map colim_{x in U} T(U_x) -> T(U), i.e. from the
    cosheafification to the table on U.
    """
    if plus is None:
        plus = cosheafify(table)
    source, _ = plus.colimit(U.members)
    target = table.value(U)
    columns = []
    for x in U.members:
        ext = table.extension(principal_open(table.base, x), U)
        columns.extend(ext.matrix.columns())
    return ab.make_hom(
        source, target, IntMatrix.from_columns(columns, target.gens)
    )
