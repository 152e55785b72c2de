"""Closed-form laws, constants, samplers, and reproducible RNG streams.

Closed forms
------------
``c_alpha_constant``      tail constant of the standard symmetric alpha-stable
                          law; the reciprocal of the integral of
                          x**(-alpha)*sin(x) over (0, inf), value 2/pi at
                          alpha = 1.
``frechet_cdf``           standard Frechet distribution function exp(-z**-alpha).
``block_max_limit_cdf``   limiting law of normalized block maxima of a
                          short-memory field: exp(-C_alpha * k**alpha * y**-alpha).
``null_cdf_t``            law of the ratio statistic when both blocks obey the
                          short-memory limit: 1 / (1 + t**-alpha).
``null_pdf_t``            its density alpha*t**(-alpha-1) / (1 + t**-alpha)**2.
``critical_value``        lower beta-quantile (beta/(1-beta))**(1/alpha).
``subgaussian_scale``     sqrt(2) * (E|G|**alpha)**(1/alpha) for standard normal
                          G; scales a variance-mixture field so its marginals
                          are standard symmetric alpha-stable.

Samplers
--------
``sample_sas`` draws from the symmetric alpha-stable law with characteristic
function exp(-(scale*|t|)**alpha) by the classic angle/exponential transform.
``sample_positive_stable`` draws the totally skewed positive law normalized so
that E[exp(-t*A)] = exp(-t**index): the skewed generator's
(1 + tan(pi*index/2)**2)**(1/(2*index)) prefactor cancels against the
(cos(pi*index/2))**(1/index) scale correction, leaving the Kanter form that
the kernel implements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels

_MASK64 = (1 << 64) - 1


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 2.0 or math.isnan(alpha):
        raise ValueError(f"alpha must lie strictly between 0 and 2, got {alpha!r}")
    return alpha


def check_probability(p: float, name: str = "beta") -> float:
    p = float(p)
    if not 0.0 < p < 1.0 or math.isnan(p):
        raise ValueError(f"{name} must lie strictly between 0 and 1, got {p!r}")
    return p


@dataclass(frozen=True)
class RngStream:
    """Reproducible randomness source.

    Identical ``(seed, stream_id, key)`` triples yield identical draw
    sequences; distinct triples yield statistically independent streams by
    construction of the underlying seed sequence.  ``key`` holds optional
    extra integer words so substreams can be derived from content (for
    example parameter values) rather than loop positions.
    """

    seed: int
    stream_id: int = 0
    key: tuple = ()

    def generator(self) -> np.random.Generator:
        entropy = [self.seed & _MASK64]
        entropy.extend(int(k) & _MASK64 for k in self.key)
        entropy.append(self.stream_id & _MASK64)
        return np.random.default_rng(np.random.SeedSequence(entropy))


@dataclass(frozen=True)
class LimitLaw:
    """Parameters of the block-maximum limit: Frechet with tail index ``alpha``
    and scale constant ``k`` (one for an i.i.d. field)."""

    alpha: float
    k: float = 1.0

    def __post_init__(self):
        check_alpha(self.alpha)
        if not self.k > 0.0:
            raise ValueError(f"k must be positive, got {self.k!r}")


def c_alpha_constant(alpha: float) -> float:
    alpha = check_alpha(alpha)
    if alpha == 1.0:
        return 2.0 / math.pi
    return (1.0 - alpha) / (math.gamma(2.0 - alpha) * math.cos(math.pi * alpha / 2.0))


def subgaussian_scale(alpha: float) -> float:
    alpha = check_alpha(alpha)
    # E|G|**alpha for standard normal G.
    moment = 2.0 ** (alpha / 2.0) * math.gamma((alpha + 1.0) / 2.0) / math.sqrt(math.pi)
    return math.sqrt(2.0) * moment ** (1.0 / alpha)


def _neg_power(x: float, alpha: float) -> float:
    """x**(-alpha) for x > 0, saturating to inf instead of raising on overflow."""
    try:
        return x ** (-alpha)
    except OverflowError:
        return math.inf


def frechet_cdf(alpha: float, z: float) -> float:
    alpha = check_alpha(alpha)
    z = float(z)
    if not z > 0.0:
        return 0.0
    return math.exp(-_neg_power(z, alpha))


def block_max_limit_cdf(law: LimitLaw, y: float) -> float:
    y = float(y)
    if not y > 0.0:
        return 0.0
    arg = c_alpha_constant(law.alpha) * law.k ** law.alpha * _neg_power(y, law.alpha)
    return math.exp(-arg)


def null_cdf_t(alpha: float, t: float) -> float:
    alpha = check_alpha(alpha)
    t = float(t)
    if not t > 0.0:
        return 0.0
    return 1.0 / (1.0 + _neg_power(t, alpha))


def null_pdf_t(alpha: float, t: float) -> float:
    alpha = check_alpha(alpha)
    t = float(t)
    if not t > 0.0:
        raise ValueError(f"the ratio statistic is positive; got t={t!r}")
    if t > 1.0:
        y = _neg_power(t, alpha)
        return alpha * y / t / (1.0 + y) ** 2
    # Equivalent form that stays finite as t -> 0 for alpha >= 1.
    p = t ** alpha
    return alpha * t ** (alpha - 1.0) / (1.0 + p) ** 2


def critical_value(alpha: float, beta: float) -> float:
    alpha = check_alpha(alpha)
    beta = check_probability(beta)
    return (beta / (1.0 - beta)) ** (1.0 / alpha)


def _as_generator(rng) -> np.random.Generator:
    if rng is None:
        return np.random.default_rng()
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"rng must be an RngStream or numpy Generator, got {type(rng)!r}")


def sample_sas(alpha: float, scale: float = 1.0, rng=None, size=None):
    """Draw from the symmetric alpha-stable law with the given scale.

    Returns a scalar when ``size`` is None, else a 1-d array of that length.
    A draw at scale c equals exactly c times the draw at scale 1 taken from
    the same stream state.
    """
    alpha = check_alpha(alpha)
    scale = float(scale)
    if not scale > 0.0:
        raise ValueError(f"scale must be positive, got {scale!r}")
    g = _as_generator(rng)
    n = 1 if size is None else int(size)
    u = g.random(n)
    w = g.standard_exponential(n)
    x = kernels.sas_values(u, w, alpha)
    if scale != 1.0:
        x = scale * x
    return float(x[0]) if size is None else x


def sample_positive_stable(index: float, rng=None, size=None):
    """Draw the positive stable multiplier with Laplace transform exp(-t**index)."""
    index = float(index)
    if not 0.0 < index < 1.0 or math.isnan(index):
        raise ValueError(f"index must lie strictly between 0 and 1, got {index!r}")
    g = _as_generator(rng)
    n = 1 if size is None else int(size)
    u = g.random(n)
    w = g.standard_exponential(n)
    a = kernels.positive_stable_values(u, w, index)
    return float(a[0]) if size is None else a
