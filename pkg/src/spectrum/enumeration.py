"""
Orthotube enumeration from one boundary component

Key principles:
- Candidates are δ = w·c·w⁻¹ for reduced words w with |w| ≤ depth and peripherals c
- Pairs where w·c^{±1} is shorter than w are skipped; a shorter word gives the same δ
- All candidates are evaluated in the chart where γ⁻ = 0 and γ⁺ = l∞, one BFS level at a time
- δ is oriented so that (γ⁻, δ⁺, δ⁻, γ⁺) is maximal, replacing δ by δ⁻¹ when needed
- A power of γ moves the midpoint of the θ-interval into [0, ℓ^F(γ)); θ⁺ just below 0 snaps to 0
- Candidates with the same reduced word γ^-k·δ·γ^k are one orthotube; the shortest word is canonical
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import DedupAmbiguityError, DomainError, NumericalFailureError
from src.geometry.lagrangian import LagrangianFrame, SymplecticElement, WeylVector
from src.geometry.siegel import standardize_pair
from src.linalg import DEFAULT_TOLERANCES, ToleranceProfile
from src.spectrum.orthotubes import lengths_from_eigenvalues, logcoth
from src.surfaces.representation import Representation, ShilovData
from src.surfaces.words import FreeWord

logger = logging.getLogger(__name__)

DEDUP_TOLERANCE = 1e-6
# word keys pack three bits per letter into an int64
MAX_WORD_LENGTH = 20

Codes = Tuple[int, ...]


def _reduce_codes(codes: Sequence[int]) -> Codes:
    reduced: List[int] = []
    for code in codes:
        if reduced and reduced[-1] == code ^ 1:
            reduced.pop()
        else:
            reduced.append(code)
    return tuple(reduced)


def _inverse_codes(codes: Sequence[int]) -> Codes:
    return tuple(code ^ 1 for code in reversed(codes))


@dataclass(frozen=True, eq=False)
class OrthotubeRecord:
    """One orthotube from γ: the peripheral conjugate δ, its θ-interval and its lengths"""

    delta_word: FreeWord
    delta_pair: Tuple[LagrangianFrame, LagrangianFrame]
    theta_interval: Tuple[float, float]
    ell_vect: WeylVector
    ell_F: float
    ell_R: float
    dF_term: float
    lower_term: float
    upper_term: float
    depth: int
    target_boundary: int
    self_orthotube: bool
    mu: Tuple[float, ...]

    def __post_init__(self):
        theta_plus, theta_minus = self.theta_interval
        slack = DEFAULT_TOLERANCES.slack(max(1.0, abs(theta_minus)))
        if theta_plus < -slack or not theta_plus < theta_minus:
            raise DomainError(f"Invalid θ-interval {self.theta_interval} for {self.delta_word}")
        term_slack = DEFAULT_TOLERANCES.slack(max(1.0, self.upper_term))
        if self.upper_term < self.dF_term - term_slack or self.dF_term < self.lower_term - term_slack:
            raise NumericalFailureError(
                f"Term chain violated for {self.delta_word}: "
                f"upper={self.upper_term}, dF={self.dF_term}, lower={self.lower_term}"
            )

    @property
    def n(self) -> int:
        return len(self.ell_vect)

    @property
    def theta_plus(self) -> float:
        return self.theta_interval[0]

    @property
    def theta_minus(self) -> float:
        return self.theta_interval[1]

    @property
    def riemannian_lower_term(self) -> float:
        """2√n · logcoth(ℓ^R(α) / 2√n)"""
        root = np.sqrt(self.n)
        return float(2.0 * root * logcoth(self.ell_R / (2.0 * root)))

    def as_row(self) -> Dict[str, object]:
        row = {
            "delta_word": str(self.delta_word),
            "theta_plus": self.theta_plus,
            "theta_minus": self.theta_minus,
            "ell_F": self.ell_F,
            "ell_R": self.ell_R,
        }
        for index, value in enumerate(self.ell_vect, start=1):
            row[f"ell_vect_{index}"] = value
        row.update({"dF_term": self.dF_term, "lower_term": self.lower_term, "upper_term": self.upper_term})
        return row



class PeripheralChart:
    """
    Normal coordinates for one boundary γ = conjugator · γ_b · conjugator⁻¹

    In these coordinates γ⁻ = 0, γ⁺ = l∞ and ρ(γ) = diag(A, A^-T) acts on charts by Z ↦ A Z Aᵀ.
    The θ origin is the oriented δ⁺ of the next peripheral, so that every
    fundamental window interval ends before ℓ^F(γ).
    """

    def __init__(self, rho: Representation, boundary=0, conjugator: Optional[FreeWord] = None,
                 tol: ToleranceProfile = DEFAULT_TOLERANCES):
        self.rho = rho
        self.tol = tol
        self.boundary = rho.spec.boundary_index(boundary)
        self.conjugator = conjugator or FreeWord()
        self.gamma_word = rho.boundary_word(self.boundary, self.conjugator)
        self.gamma = rho.evaluate(self.gamma_word)
        self.data: ShilovData = rho.shilov(self.boundary, self.conjugator)
        self.transport: SymplecticElement = standardize_pair(self.data.repel, self.data.attract, tol)

        n = rho.n
        normal = self.transport.matrix @ self.gamma.matrix @ self.transport.inverse().matrix
        off_diagonal = max(np.max(np.abs(normal[:n, n:])), np.max(np.abs(normal[n:, :n])))
        if off_diagonal > tol.slack(np.max(np.abs(normal))):
            raise NumericalFailureError(f"Peripheral is not block diagonal in its normal chart ({off_diagonal:.3e})")
        self.block = normal[:n, :n]
        self.ell_F = float(np.linalg.slogdet(self.block)[1])

        # frames are moved by N = g_norm ρ(conjugator)
        self.to_normal = self.transport.matrix @ rho.evaluate(self.conjugator).matrix
        self.from_normal = np.linalg.inv(self.to_normal)

        base_index = (self.boundary + 1) % len(rho.spec.peripherals)
        base = rho.shilov(base_index)
        charts = _charts(np.stack([self.to_normal @ base.attract.frame, self.to_normal @ base.repel.frame]), n)
        plus, minus = charts[0], charts[1]
        if _min_eig(plus) > tol.pd_margin and _min_eig(minus - plus) > tol.pd_margin:
            base_chart, base_frame = plus, base.attract
        else:
            base_chart, base_frame = minus, base.repel
        if _min_eig(base_chart) <= tol.pd_margin:
            raise NumericalFailureError("θ basepoint does not lie between γ⁻ and γ⁺")
        self.theta_base = 0.5 * float(np.linalg.slogdet(base_chart)[1])
        self.basepoint = LagrangianFrame(rho.evaluate(self.conjugator).matrix @ base_frame.frame, check=False)

        self.peripheral_codes = [word.codes() for word in rho.spec.peripherals]
        self._gamma_codes = self.gamma_word.codes()
        self._conjugator_codes = self.conjugator.codes()

        logger.debug(f"PeripheralChart {rho.spec.boundary_names[self.boundary]} "
                     f"(conjugator {self.conjugator}): ℓ^F = {self.ell_F:.12f}")

    @property
    def n(self) -> int:
        return self.rho.n

    def gamma_power(self, k: int) -> np.ndarray:
        """A^k"""
        if k >= 0:
            return np.linalg.matrix_power(self.block, k)
        return np.linalg.matrix_power(np.linalg.inv(self.block), -k)

    def frame_from_chart(self, chart: np.ndarray) -> LagrangianFrame:
        """Original-coordinate Lagrangian of a normal-chart matrix"""
        return LagrangianFrame(self.transport.inverse().matrix @ np.vstack([chart, np.eye(self.n)]), check=False)

    def delta_codes(self, word: Sequence[int], target: int, swapped: bool, shift: int) -> Codes:
        """Reduced codes of γ^-k · v w c^{±1} w⁻¹ v⁻¹ · γ^k, v the conjugator"""
        power = _inverse_codes(self._gamma_codes) * shift if shift >= 0 else self._gamma_codes * (-shift)
        outer = _reduce_codes(power + self._conjugator_codes + tuple(word))
        inner = self.peripheral_codes[target]
        if swapped:
            inner = _inverse_codes(inner)
        return _reduce_codes(outer + inner + _inverse_codes(outer))


def fold_into_window(theta_plus: np.ndarray, theta_minus: np.ndarray, ell: float,
                     tol: ToleranceProfile = DEFAULT_TOLERANCES) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Translate θ-intervals by multiples of ℓ so that each midpoint lies in [0, ℓ)

    Distinct orthotubes have disjoint intervals, so only the one starting at the
    θ origin can straddle a window edge; its θ⁺ lands within slack of 0 and is
    snapped to it. Narrow intervals next to ℓ are never split.

    Returns:
        (shift, θ⁺ − shift·ℓ, θ⁻ − shift·ℓ)
    """
    theta_plus = np.asarray(theta_plus, dtype=float)
    theta_minus = np.asarray(theta_minus, dtype=float)
    shift = np.floor(0.5 * (theta_plus + theta_minus) / ell).astype(np.int64)
    plus = theta_plus - shift * ell
    minus = theta_minus - shift * ell
    plus = np.where((plus < 0.0) & (plus > -tol.slack(ell)), 0.0, plus)
    return shift, plus, minus


def _charts(frames: np.ndarray, n: int) -> np.ndarray:
    top, bottom = frames[..., :n, :], frames[..., n:, :]
    charts = np.swapaxes(np.linalg.solve(np.swapaxes(bottom, -1, -2), np.swapaxes(top, -1, -2)), -1, -2)
    return 0.5 * (charts + np.swapaxes(charts, -1, -2))


def _half_logdet(frames: np.ndarray, n: int) -> np.ndarray:
    """½ log det of the chart top·bottom⁻¹, without forming it"""
    return 0.5 * (np.linalg.slogdet(frames[..., :n, :])[1] - np.linalg.slogdet(frames[..., n:, :])[1])


def _min_eig(symmetric: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh(symmetric)[..., 0]


def _orient(first: np.ndarray, second: np.ndarray, margin: float) -> Tuple[np.ndarray, np.ndarray]:
    """(ok, μ) with ok iff first PD and the eigenvalues μ of first⁻¹·second all exceed 1"""
    count, n = first.shape[0], first.shape[-1]
    mu = np.full((count, n), np.nan)
    ok = _min_eig(first) > margin
    if np.any(ok):
        factor = np.linalg.cholesky(first[ok])
        inverse = np.linalg.inv(factor)
        middle = inverse @ second[ok] @ np.swapaxes(inverse, -1, -2)
        mu[ok] = np.linalg.eigvalsh(0.5 * (middle + np.swapaxes(middle, -1, -2)))
    ok &= np.nan_to_num(mu[:, 0], nan=0.0) > 1.0 + margin
    return ok, mu


def _absorbed(words: np.ndarray, level: int, peripherals: Sequence[Codes]) -> np.ndarray:
    """mask[i, c] iff w_i·c^{±1} is shorter than w_i"""
    mask = np.zeros((len(words), len(peripherals)), dtype=bool)
    for index, codes in enumerate(peripherals):
        span = len(codes) // 2 + 1
        if level < span:
            continue
        for power in (codes, _inverse_codes(codes)):
            tail = np.array(_inverse_codes(power[:span]), dtype=words.dtype)
            mask[:, index] |= np.all(words[:, level - span:] == tail, axis=1)
    return mask


@dataclass
class _Candidates:
    theta_plus: np.ndarray
    theta_minus: np.ndarray
    mu: np.ndarray
    plus: np.ndarray
    minus: np.ndarray
    depth: np.ndarray
    words: np.ndarray
    word_key: np.ndarray
    target: np.ndarray
    swapped: np.ndarray
    shift: np.ndarray


def _evaluate_level(chart: PeripheralChart, frames: np.ndarray, words: np.ndarray, level: int,
                    max_depth: int) -> Optional[_Candidates]:
    tol = chart.tol
    n = chart.n
    peripherals = len(chart.peripheral_codes)
    count = frames.shape[0]

    flat = frames.reshape(count * peripherals, 2, 2 * n, n)
    word_index = np.repeat(np.arange(count), peripherals)
    target = np.tile(np.arange(peripherals), count)

    sigma = np.linalg.svd(flat[..., n:, :], compute_uv=False)[..., -1]
    valid = np.all(sigma > tol.pd_margin, axis=1)
    if level == 0:
        valid &= target != chart.boundary
    else:
        # also drops w ∈ ⟨γ_b⟩ with c = γ_b, where δ would be γ itself
        valid &= ~_absorbed(words, level, chart.peripheral_codes).reshape(-1)

    if not np.any(valid):
        return None
    flat, word_index, target = flat[valid], word_index[valid], target[valid]
    charts = _charts(flat, n)
    plus, minus = charts[:, 0], charts[:, 1]

    normal, mu_normal = _orient(plus, minus, tol.pd_margin)
    reverse, mu_reverse = _orient(minus, plus, tol.pd_margin)
    swapped = ~normal & reverse
    keep = normal | reverse
    rejected = int(np.sum(~keep))
    if rejected:
        logger.debug(f"Level {level}: {rejected} candidates admit no maximal orientation")
    if not np.any(keep):
        return None

    swapped = swapped[keep]
    first = np.where(swapped[:, None, None], minus[keep], plus[keep])
    second = np.where(swapped[:, None, None], plus[keep], minus[keep])
    mu = np.where(swapped[:, None], mu_reverse[keep], mu_normal[keep])
    word_index, target = word_index[keep], target[keep]

    theta = _half_logdet(flat[keep], n) - chart.theta_base
    theta_plus = np.where(swapped, theta[:, 1], theta[:, 0])
    theta_minus = np.where(swapped, theta[:, 0], theta[:, 1])
    shift, theta_plus, theta_minus = fold_into_window(theta_plus, theta_minus, chart.ell_F, tol)

    for k in np.unique(shift):
        if k == 0:
            continue
        power = chart.gamma_power(-int(k))
        rows = shift == k
        first[rows] = power @ first[rows] @ power.T
        second[rows] = power @ second[rows] @ power.T

    padded = np.full((len(word_index), max_depth), -1, dtype=np.int8)
    padded[:, :level] = words[word_index]
    key = np.zeros(len(word_index), dtype=np.int64)
    for column in range(level):
        key = key * 8 + words[word_index, column].astype(np.int64)

    return _Candidates(
        theta_plus=theta_plus,
        theta_minus=theta_minus,
        mu=mu,
        plus=first,
        minus=second,
        depth=np.full(len(word_index), level),
        words=padded,
        word_key=key,
        target=target,
        swapped=swapped,
        shift=shift,
    )


def _concatenate(parts: List[_Candidates]) -> _Candidates:
    return _Candidates(*(np.concatenate([getattr(part, name) for part in parts])
                         for name in _Candidates.__dataclass_fields__))


def _take(candidates: _Candidates, index) -> _Candidates:
    return _Candidates(*(getattr(candidates, name)[index] for name in _Candidates.__dataclass_fields__))


def _word_of(candidates: _Candidates, index: int) -> FreeWord:
    depth = int(candidates.depth[index])
    return FreeWord.from_codes(candidates.words[index, :depth].tolist())


def _delta_keys(chart: PeripheralChart, candidates: _Candidates) -> List[Codes]:
    rows = zip(candidates.words.tolist(), candidates.depth.tolist(), candidates.target.tolist(),
               candidates.swapped.tolist(), candidates.shift.tolist())
    return [chart.delta_codes(word[:depth], target, swapped, shift)
            for word, depth, target, swapped, shift in rows]


def _dedupe(chart: PeripheralChart, candidates: _Candidates) -> Tuple[_Candidates, List[Codes]]:
    """One candidate per orthotube, sorted by θ⁺, with the reduced δ codes of each"""
    order = np.lexsort((candidates.swapped, candidates.target, candidates.word_key, candidates.depth))
    ordered = _take(candidates, order)
    keys = _delta_keys(chart, ordered)

    first_seen: Dict[Codes, int] = {}
    representative = np.fromiter((first_seen.setdefault(key, index) for index, key in enumerate(keys)),
                                 dtype=np.int64, count=len(keys))
    scale = max(1.0, chart.ell_F)
    drift = np.maximum(np.abs(ordered.theta_plus - ordered.theta_plus[representative]),
                       np.abs(ordered.theta_minus - ordered.theta_minus[representative]))
    drifted = int(np.sum(drift > DEDUP_TOLERANCE * scale))
    if drifted:
        logger.debug(f"{drifted} longer words place their orthotube up to {float(np.max(drift)):.3e} "
                     f"away from the canonical word")

    canonical = np.flatnonzero(representative == np.arange(len(keys)))
    result = _take(ordered, canonical)
    order = np.argsort(result.theta_plus, kind="stable")
    result = _take(result, order)
    keys = [keys[canonical[index]] for index in order]

    limit = DEDUP_TOLERANCE * scale
    overlaps = result.theta_minus[:-1] - result.theta_plus[1:]
    if len(result.theta_plus) > 1:
        overlaps = np.append(overlaps, result.theta_minus[-1] - chart.ell_F - result.theta_plus[0])
    if np.any(overlaps > limit):
        bad = int(np.argmax(overlaps))
        following = (bad + 1) % len(result.theta_plus)
        raise DedupAmbiguityError("Distinct orthotubes have overlapping θ-intervals",
                                  str(_word_of(result, bad)), str(_word_of(result, following)),
                                  overlap=float(overlaps[bad]))
    if np.any(result.theta_minus > chart.ell_F + limit):
        raise NumericalFailureError("θ-interval leaves the fundamental window",
                                    theta_minus=float(np.max(result.theta_minus)), ell_F=chart.ell_F)
    return result, keys


def _record(chart: PeripheralChart, candidates: _Candidates, index: int, key: Codes) -> OrthotubeRecord:
    n = chart.n
    target = int(candidates.target[index])
    mu = np.sort(candidates.mu[index])
    ell_vect = lengths_from_eigenvalues(mu, chart.tol)
    lengths = ell_vect.as_array()
    ell_F = 0.5 * float(np.sum(lengths))
    dF = 0.5 * float(np.sum(np.log(mu)))
    return OrthotubeRecord(
        delta_word=FreeWord.from_codes(key),
        delta_pair=(chart.frame_from_chart(candidates.plus[index]), chart.frame_from_chart(candidates.minus[index])),
        theta_interval=(float(candidates.theta_plus[index]), float(candidates.theta_minus[index])),
        ell_vect=ell_vect,
        ell_F=ell_F,
        ell_R=float(np.sqrt(np.sum(lengths ** 2))),
        dF_term=dF,
        lower_term=float(n * logcoth(ell_F / n)),
        upper_term=float(n * logcoth(lengths[-1] / 2.0)),
        depth=int(candidates.depth[index]),
        target_boundary=target,
        self_orthotube=target == chart.boundary,
        mu=tuple(float(m) for m in mu),
    )


def enumerate_orthotubes(rho: Representation, boundary=0, depth: int = 6,
                         tol: ToleranceProfile = DEFAULT_TOLERANCES,
                         conjugator: Optional[FreeWord] = None,
                         chart: Optional[PeripheralChart] = None) -> List[OrthotubeRecord]:
    """
    Orthotubes from γ found through words of length ≤ depth, one per ⟨γ⟩-class

    Args:
        rho: Representation of the pair of pants
        boundary: Boundary index or name of γ
        depth: Maximal word length, at most MAX_WORD_LENGTH
        tol: Tolerance profile
        conjugator: Optional word w; enumerate for w·γ·w⁻¹ instead of γ
        chart: Precomputed PeripheralChart (overrides boundary and conjugator)

    Returns:
        Records sorted by θ⁺
    """
    if not 0 <= depth <= MAX_WORD_LENGTH:
        raise DomainError(f"Depth must lie in [0, {MAX_WORD_LENGTH}], got {depth}")
    chart = chart or PeripheralChart(rho, boundary, conjugator, tol)
    n = rho.n
    rank = rho.spec.rank

    letters = [chart.to_normal @ rho.letter(code // 2 + 1, 1 if code % 2 == 0 else -1).matrix @ chart.from_normal
               for code in range(2 * rank)]
    base = np.stack([
        np.stack([chart.to_normal @ data.attract.frame, chart.to_normal @ data.repel.frame])
        for data in (rho.shilov(index) for index in range(len(rho.spec.peripherals)))
    ])

    frames = base[None]
    words = np.zeros((1, 0), dtype=np.int8)
    parts: List[_Candidates] = []
    for level in range(depth + 1):
        evaluated = _evaluate_level(chart, frames, words, level, max(depth, 1))
        if evaluated is not None:
            parts.append(evaluated)
        logger.debug(f"Level {level}: {len(words)} words, "
                     f"{0 if evaluated is None else len(evaluated.depth)} candidates")
        if level == depth:
            break

        grown_frames, grown_words = [], []
        for code, letter in enumerate(letters):
            mask = np.ones(len(words), dtype=bool) if level == 0 else words[:, 0] != (code ^ 1)
            if not np.any(mask):
                continue
            grown_frames.append(letter @ frames[mask])
            grown_words.append(np.concatenate([np.full((int(mask.sum()), 1), code, dtype=np.int8), words[mask]], axis=1))
        frames = np.linalg.qr(np.concatenate(grown_frames))[0]
        words = np.concatenate(grown_words)

    if not parts:
        return []
    canonical, keys = _dedupe(chart, _concatenate(parts))
    records = [_record(chart, canonical, index, key) for index, key in enumerate(keys)]
    logger.info(f"Enumerated {len(records)} orthotubes from {rho.spec.boundary_names[chart.boundary]} "
                f"at depth {depth} (n={n})")
    return records
