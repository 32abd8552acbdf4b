import json
import logging

from cosheaftools.algebra import groups as ab
from cosheaftools.algebra.groups import AbGroup, IsoClass
from cosheaftools.common.exceptions import (
    BoundaryError,
    DocumentException,
    EndpointMismatch,
)
from cosheaftools.common import utils

log = logging.getLogger(__name__)

PIPELINES = ('bm', 'cech', 'derived', 'bm-subdivision')


class ChainComplex:
    """
    Groups in degrees 0..top and boundaries degree n -> degree n-1 for
    1 <= n <= top. The constructor verifies that consecutive boundaries
    compose to zero.
    """

    def __init__(self, groups, boundaries):
        self.groups = list(groups)
        self.boundaries = dict(boundaries)
        for n in range(1, len(self.groups)):
            d = self.boundaries.get(n)
            if d is None:
                d = ab.zero_hom(self.groups[n], self.groups[n - 1])
                self.boundaries[n] = d
            if d.source != self.groups[n] or d.target != self.groups[n - 1]:
                raise EndpointMismatch(
                    'Boundary in degree {0} has wrong endpoints'.format(n)
                )
        for n in range(2, len(self.groups)):
            square = ab.compose(self.boundaries[n - 1], self.boundaries[n])
            if not ab.maps_to_zero(square):
                raise BoundaryError(
                    'Boundary squares to a nonzero map from degree {0} to '
                    'degree {1}'.format(n, n - 2)
                )

    @property
    def top(self):
        return len(self.groups) - 1

    def group(self, n):
        if 0 <= n < len(self.groups):
            return self.groups[n]
        return AbGroup.trivial()

    def boundary(self, n):
        """The boundary out of degree n; zero outside 1..top."""
        if 1 <= n <= self.top:
            return self.boundaries[n]
        return ab.zero_hom(self.group(n), self.group(n - 1))


class HomologyReport:
    """Per-degree isomorphism classes tagged with the pipeline that produced
    them. Degrees past the stored range are trivial."""

    def __init__(self, pipeline, classes, notes=None):
        self.pipeline = pipeline
        self.classes = tuple(classes)
        self.notes = dict(notes or {})

    def degree(self, n):
        if 0 <= n < len(self.classes):
            return self.classes[n]
        return IsoClass(0, ())

    def padded(self, count):
        return tuple(self.degree(n) for n in range(count))

    def to_record(self):
        record = {
            'pipeline': self.pipeline,
            'H': [
                dict(degree=n, **c.to_record())
                for n, c in enumerate(self.classes)
            ],
        }
        if self.notes:
            record['notes'] = self.notes
        return record

    def to_json(self):
        return utils.dump_json(self.to_record())

    @classmethod
    def from_record(cls, record):
        try:
            entries = sorted(record['H'], key=lambda e: int(e['degree']))
            classes = []
            for expected, entry in enumerate(entries):
                if int(entry['degree']) != expected:
                    raise DocumentException(
                        'Report degrees must run 0, 1, 2, ...', field='H'
                    )
                classes.append(IsoClass.from_record(entry))
            return cls(record['pipeline'], classes, record.get('notes'))
        except (KeyError, TypeError, ValueError) as e:
            raise DocumentException(
                'Malformed homology report: {0}'.format(e)
            )

    @classmethod
    def from_json(cls, text):
        try:
            record = json.loads(text)
        except ValueError as e:
            raise DocumentException(
                'Report is not valid JSON: {0}'.format(e),
                line=getattr(e, 'lineno', None)
            )
        return cls.from_record(record)

    def __eq__(self, other):
        if not isinstance(other, HomologyReport):
            return NotImplemented
        count = max(len(self.classes), len(other.classes))
        return (
            self.pipeline == other.pipeline and
            self.padded(count) == other.padded(count)
        )

    def __repr__(self):
        return 'HomologyReport({0}: {1})'.format(
            self.pipeline, ', '.join(str(c) for c in self.classes)
        )


class OrderedIncidence:
    """
    Incidence signs [sigma : tau] = (-1)^i where tau omits the i-th vertex of
    sigma in the complex's vertex order.
    """

    def __init__(self, K):
        self.complex = K
        self.signs = {}
        for sigma in K.simplices:
            for i, tau in K.faces(sigma):
                self.signs[(sigma, tau)] = -1 if i % 2 else 1

    def sign(self, sigma, tau):
        return self.signs[(sigma, tau)]

    def double_boundary_cancels(self):
        """Sum of sign products over each length-two face chain is zero."""
        K = self.complex
        for sigma in K.simplices:
            totals = {}
            for i, tau in K.faces(sigma):
                for k, rho in K.faces(tau):
                    totals[rho] = totals.get(rho, 0) + (
                        self.signs[(sigma, tau)] * self.signs[(tau, rho)]
                    )
            if any(totals.values()):
                return False
        return True


def homology(complex_, pipeline='bm', top=None):
    """Degreewise homology ker(d_n) / im(d_{n+1}) for n = 0..top."""
    if top is None:
        top = complex_.top
    classes = [
        ab.homology_at(complex_.boundary(n + 1), complex_.boundary(n))
        for n in range(top + 1)
    ]
    report = HomologyReport(pipeline, classes)
    log.debug('{0}'.format(report))
    return report
