"""
Run the independent homology pipelines on one input and compare them degree
by degree.
"""
import logging
from concurrent.futures import ThreadPoolExecutor

from cosheaftools.common import utils
from cosheaftools.core.pipelines import (
    bm_homology,
    bm_poset,
    cech_homology,
    minimal_cover,
    vertex_cover_cech,
)
from cosheaftools.core.resolution import (
    DEFAULT_EXTRA_DEPTH,
    derived_homology,
)

log = logging.getLogger(__name__)


class CrosscheckVerdict:
    """Reports keyed by pipeline tag, compared over degrees 0..top."""

    def __init__(self, reports, top, skipped=()):
        self.reports = dict(reports)
        self.top = top
        self.skipped = list(skipped)
        self.first_mismatch = None
        tags = [t for t in self.reports if t not in self.skipped]
        for n in range(top + 1):
            values = {t: self.reports[t].degree(n) for t in tags}
            if len(set(values.values())) > 1:
                self.first_mismatch = (n, values)
                break

    @property
    def agree(self):
        return self.first_mismatch is None

    def to_record(self):
        record = {
            'agree': self.agree,
            'degrees': list(range(self.top + 1)),
            'reports': {
                tag: report.to_record()
                for tag, report in sorted(self.reports.items())
            },
        }
        if self.skipped:
            record['skipped'] = sorted(self.skipped)
        if self.first_mismatch is not None:
            n, values = self.first_mismatch
            record['first_mismatch'] = {
                'degree': n,
                'values': {t: str(c) for t, c in sorted(values.items())},
            }
        return record

    def to_json(self):
        return utils.dump_json(self.to_record())


def _check_extra_depth(extra_depth):
    if extra_depth < 1:
        raise ValueError(
            'extra_depth must be at least 1, got {0}'.format(extra_depth)
        )


def _run(jobs, parallel):
    if not parallel:
        return {tag: job() for tag, job in jobs}
    with ThreadPoolExecutor(max_workers=len(jobs)) as pool:
        futures = {tag: pool.submit(job) for tag, job in jobs}
        return {tag: future.result() for tag, future in futures.items()}


def crosscheck(K, F, parallel=False, extra_depth=DEFAULT_EXTRA_DEPTH):
    """
    Compare Borel-Moore, vertex-cover Cech, derived and subdivided
    Borel-Moore homology of F over K in degrees 0..dim K + 1.
    """
    _check_extra_depth(extra_depth)
    top = max(K.dimension, 0) + 1
    depth = max(K.dimension, 0) + extra_depth
    jobs = [
        ('bm', lambda: bm_homology(K, F)),
        ('cech', lambda: vertex_cover_cech(K, F)),
        ('derived', lambda: derived_homology(F, depth)),
        ('bm-subdivision', lambda: bm_poset(F.base, F, 'bm-subdivision')),
    ]
    with utils.Timer('crosscheck', log):
        verdict = CrosscheckVerdict(_run(jobs, parallel), top)
    _log_verdict(verdict)
    return verdict


def crosscheck_poset(F, parallel=False, extra_depth=DEFAULT_EXTRA_DEPTH):
    """
    Compare Borel-Moore homology on the order complex, Cech homology over the
    cover by minimal elements and derived homology. Cech is left out of the
    comparison when the comparison hypothesis fails on the cover.
    """
    _check_extra_depth(extra_depth)
    P = F.base
    top = max(P.dimension(), 0) + 1
    depth = max(P.dimension(), 0) + extra_depth
    jobs = [
        ('bm', lambda: bm_poset(P, F)),
        ('cech', lambda: cech_homology(F, minimal_cover(P))),
        ('derived', lambda: derived_homology(F, depth)),
    ]
    with utils.Timer('crosscheck', log):
        reports = _run(jobs, parallel)
        skipped = []
        if reports['cech'].notes.get('hypothesis_failures'):
            skipped.append('cech')
        verdict = CrosscheckVerdict(reports, top, skipped)
    _log_verdict(verdict)
    return verdict


def _log_verdict(verdict):
    if verdict.agree:
        log.info('All pipelines agree in degrees 0..{0}'.format(verdict.top))
    else:
        n, values = verdict.first_mismatch
        log.error('Pipelines disagree in degree {0}: {1}'.format(
            n, ', '.join(
                '{0}={1}'.format(t, c) for t, c in sorted(values.items())
            )
        ))
