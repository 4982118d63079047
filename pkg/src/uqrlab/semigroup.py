"""Finitely generated power-type semigroups: words, orbits, Julia data.

Words are tuples of 0-based generator indices with the leftmost index applied
last, matching g_{i1} o ... o g_{ij}.  For power-type generators every word
is again power-type, its parameters exact in log space, so radial questions
(word Julia radii, orbit classification, invariance checks) reduce to exact
interval arithmetic on log radii.  Normality itself has no finite
certificate: classification reports are evidence with re-runnable witnesses,
never proofs.
"""

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import BudgetExceededError, InvalidParameterError, UnsupportedOperationError
from .geometry import INFINITY
from .powermaps import PowerMap

_ESCAPE_CLAMP = 1e12


@dataclass(frozen=True)
class ClassificationReport:
    verdict: str  # attracted | escaping | mixed-expansion
    witnesses: dict
    expansion: float
    seed: int
    note: str = "evidence from sampled words; normality is not decidable numerically"

    def __post_init__(self):
        if self.verdict not in ("attracted", "escaping", "mixed-expansion"):
            raise InvalidParameterError(f"unknown verdict {self.verdict!r}")


@dataclass(frozen=True)
class InvarianceReport:
    forward_ok: bool
    backward_ok: bool
    decomposition_ok: bool
    details: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.forward_ok and self.backward_ok and self.decomposition_ok


class SemigroupSpec:
    """Generator list plus the word algebra over it."""

    def __init__(self, generators, labels=None):
        if not generators:
            raise InvalidParameterError("at least one generator is required")
        for g in generators:
            if not isinstance(g, PowerMap):
                raise UnsupportedOperationError("word algebra needs power-type generators")
            if abs(g.d) < 2:
                raise InvalidParameterError("generators must be non-injective (|d| >= 2)")
        self.generators = list(generators)
        self.labels = list(labels) if labels else [f"g{i+1}" for i in range(len(generators))]
        self.dim = generators[0].dim

    def __len__(self):
        return len(self.generators)

    # -- word algebra ---------------------------------------------------------

    def word_params(self, word):
        if not word:
            raise InvalidParameterError("words must be nonempty")
        params = self.generators[word[-1]].params
        for idx in word[-2::-1]:
            params = self.generators[idx].params.compose(params)
        return params

    def word_map(self, word):
        return PowerMap(self.word_params(word), dim=self.dim, validate=False)

    def iter_words(self, maxlen, budget=2 ** 14):
        k = len(self.generators)
        total = sum(k ** j for j in range(1, maxlen + 1))
        if total > budget:
            raise BudgetExceededError(
                f"{total} words of length <= {maxlen} exceed the budget {budget}"
            )
        for j in range(1, maxlen + 1):
            yield from product(range(k), repeat=j)

    def word_julia_radii(self, maxlen, budget=2 ** 14):
        """Sorted Julia-sphere radii of all words of length <= maxlen,
        duplicates merged at 1e-12."""
        self._require_expanding()
        radii = sorted(self.word_params(w).julia_radius() for w in self.iter_words(maxlen, budget))
        merged = []
        for r in radii:
            if not merged or r - merged[-1] > 1e-12:
                merged.append(r)
        return merged

    def julia_ring_estimate(self, maxlen, budget=2 ** 14):
        radii = self.word_julia_radii(maxlen, budget)
        return radii[0], radii[-1]

    def _require_expanding(self):
        if any(g.d < 2 for g in self.generators):
            raise InvalidParameterError("radial Julia data needs all degrees >= 2")

    def generator_radius_window(self):
        radii = [g.params.julia_radius() for g in self.generators]
        return min(radii), max(radii)

    # -- orbits ---------------------------------------------------------------

    def backward_orbit(self, x, depth, budget=10 ** 5):
        """Breadth-first preimage tree to the given depth, truncated at budget
        points.  Returns (points, words) with words mapping each point to x."""
        if x is INFINITY:
            raise InvalidParameterError("infinity is exceptional for power-type semigroups")
        x = np.asarray(x, dtype=np.float64)
        if np.all(x == 0.0):
            raise InvalidParameterError("0 is exceptional for power-type semigroups")
        points = [x]
        words = [()]
        frontier = [(x, ())]
        for _ in range(depth):
            nxt = []
            for pt, word in frontier:
                for gi, g in enumerate(self.generators):
                    for pre in g.preimages(pt):
                        if len(points) >= budget:
                            return points, words
                        w = word + (gi,)
                        points.append(pre)
                        words.append(w)
                        nxt.append((pre, w))
            frontier = nxt
        return points, words

    def apply_word(self, word, y):
        for idx in reversed(word):
            y = self.generators[idx](y)
        return y

    # -- classification -------------------------------------------------------

    def classify(self, x, word_budget=64, seed=0, max_steps=64):
        """Classify a point as attracted, escaping or mixed-expansion.

        Random generator words are followed as radial log-orbits; a point pair
        at chordal distance 1e-6 around x rides along, and chordal separation
        beyond 0.1 under some word is reported as expansion evidence.  Random
        sampling cannot hit the near-resonant words that exhibit expansion at
        interior ring radii, so pure generator powers and one greedily steered
        word (kept centred in the Julia radius window) are always probed too.
        """
        self._require_expanding()
        if x is INFINITY:
            return ClassificationReport("escaping", {"fixed": "infinity"}, math.inf, seed)
        x = np.asarray(x, dtype=np.float64) if np.ndim(x) else np.array([x])
        r = float(np.linalg.norm(x))
        if r == 0.0:
            return ClassificationReport("attracted", {"fixed": "origin"}, 0.0, seed)
        return self.classify_radius(r, word_budget=word_budget, seed=seed, max_steps=max_steps)

    def classify_radius(self, r, word_budget=64, seed=0, max_steps=64):
        rmin, rmax = self.generator_radius_window()
        t0 = math.log(r)
        lo = math.log(1e-6 * rmin)
        hi = math.log(min(1e6 * rmax, _ESCAPE_CLAMP))
        ds = np.array([g.d for g in self.generators], dtype=np.float64)
        ls = np.array([g.params.loglam for g in self.generators])
        eta = 0.5e-6 * (1.0 + r * r) / r  # half log-width of a chordal-1e-6 pair

        def chordal_gap(ta, tb):
            ra, rb = math.exp(min(ta, 700.0)), math.exp(min(tb, 700.0))
            return abs(ra - rb) / math.sqrt((1.0 + ra * ra) * (1.0 + rb * rb))

        rng = np.random.default_rng(seed)
        k = len(self.generators)
        n_random = max(word_budget - k, 1)
        words = rng.integers(0, k, size=(n_random, max_steps))
        pure = np.repeat(np.arange(k)[:, None], max_steps, axis=1)
        words = np.vstack([pure, words])

        attracted = np.zeros(len(words), dtype=bool)
        escaping = np.zeros(len(words), dtype=bool)
        active = np.ones(len(words), dtype=bool)
        expansion = 0.0
        witness = None
        t = np.full(len(words), t0)
        tp = np.full(len(words), t0 + eta)
        tm = np.full(len(words), t0 - eta)
        for step in range(max_steps):
            gsel = words[:, step]
            t[active] = ls[gsel[active]] + ds[gsel[active]] * t[active]
            tp[active] = ls[gsel[active]] + ds[gsel[active]] * tp[active]
            tm[active] = ls[gsel[active]] + ds[gsel[active]] * tm[active]
            for i in np.nonzero(active)[0]:
                gap = chordal_gap(tp[i], tm[i])
                if gap > expansion:
                    expansion = gap
                    if gap > 0.1:
                        witness = tuple(int(v) for v in words[i, : step + 1])
                if t[i] < lo:
                    attracted[i] = True
                    active[i] = False
                elif t[i] > hi:
                    escaping[i] = True
                    active[i] = False
            if not active.any():
                break

        steered = self._steered_witness(t0, eta, max_steps, chordal_gap)
        if steered is not None:
            witness_word, gap = steered
            if gap > expansion:
                expansion = gap
            if gap > 0.1 and witness is None:
                witness = witness_word

        witnesses = {}
        if witness is not None:
            witnesses["expanding"] = witness
            return ClassificationReport("mixed-expansion", witnesses, expansion, seed)
        if attracted.any() and escaping.any():
            witnesses["attracting"] = tuple(int(v) for v in words[np.argmax(attracted)])
            witnesses["escaping"] = tuple(int(v) for v in words[np.argmax(escaping)])
            return ClassificationReport("mixed-expansion", witnesses, expansion, seed)
        if attracted.all():
            witnesses["attracting"] = tuple(int(v) for v in words[0])
            return ClassificationReport("attracted", witnesses, expansion, seed)
        if escaping.all():
            witnesses["escaping"] = tuple(int(v) for v in words[0])
            return ClassificationReport("escaping", witnesses, expansion, seed)
        raise BudgetExceededError("classification undecided within the word budget")

    def _steered_witness(self, t0, eta, max_steps, chordal_gap):
        """Greedy word keeping the orbit centred in the log Julia window."""
        rmin, rmax = self.generator_radius_window()
        tmin, tmax = math.log(rmin), math.log(rmax)
        if not (tmin - 1e-9 <= t0 <= tmax + 1e-9):
            return None
        mid = 0.5 * (tmin + tmax)
        t, tp, tm = t0, t0 + eta, t0 - eta
        word = []
        best = 0.0
        for _ in range(max_steps):
            nxt = [(abs(g.params.loglam + g.d * t - mid), gi) for gi, g in enumerate(self.generators)]
            _, gi = min(nxt)
            g = self.generators[gi]
            t = g.params.loglam + g.d * t
            tp = g.params.loglam + g.d * tp
            tm = g.params.loglam + g.d * tm
            word.append(gi)
            gap = chordal_gap(tp, tm)
            if gap > best:
                best = gap
            if best > 0.1:
                return tuple(word), best
        return tuple(word), best

    # -- invariance -----------------------------------------------------------

    def invariance_check(self, julia_sample, fatou_sample, tol=1e-9):
        """Forward invariance of the Fatou samples, backward invariance of the
        Julia samples, and the radial generator decomposition of the ring."""
        self._require_expanding()
        rmin, rmax = self.generator_radius_window()
        lmin, lmax = math.log(rmin), math.log(rmax)

        forward_ok = True
        fdetails = []
        for p in fatou_sample:
            r = float(np.linalg.norm(np.asarray(p, dtype=np.float64)))
            for g in self.generators:
                img = g.params.loglam + g.d * math.log(r)
                inside = lmin - tol < img < lmax + tol
                fdetails.append((r, g.d, math.exp(img), not inside))
                if inside:
                    forward_ok = False

        backward_ok = True
        bdetails = []
        for p in julia_sample:
            r = float(np.linalg.norm(np.asarray(p, dtype=np.float64)))
            for g in self.generators:
                pre = (math.log(r) - g.params.loglam) / g.d
                ok = lmin - tol <= pre <= lmax + tol
                bdetails.append((r, g.d, math.exp(pre), ok))
                if not ok:
                    backward_ok = False

        # J = union of generator preimages of J, on the log-radius interval.
        intervals = sorted(
            ((lmin - g.params.loglam) / g.d, (lmax - g.params.loglam) / g.d)
            for g in self.generators
        )
        cover = lmin
        decomposition_ok = True
        for a, b in intervals:
            if a > cover + 1e-12:
                decomposition_ok = False
                break
            cover = max(cover, b)
        if cover < lmax - 1e-12:
            decomposition_ok = False

        return InvarianceReport(
            forward_ok,
            backward_ok,
            decomposition_ok,
            {"forward": fdetails, "backward": bdetails, "cover": (math.exp(lmin), math.exp(cover))},
        )


def ring_semigroup(a, dim=3):
    """Two-generator semigroup whose Julia set is the closed ring 1 <= |x| <= a."""
    if a <= 1:
        raise InvalidParameterError("the ring needs a > 1")
    from .powermaps import power_map

    return SemigroupSpec(
        [power_map(2, 1.0, dim=dim), power_map(2, 1.0 / a, dim=dim)],
        labels=["f", "g"],
    )
