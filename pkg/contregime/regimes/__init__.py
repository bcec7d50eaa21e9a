import re

from contregime.errors import InvalidArgumentError
from contregime.regimes.base_regime import BaseRegime, density_ratio, \
    sample_regime
from contregime.regimes.dependent import IncrementalRegime, ShiftRegime, \
    ThresholdRegime
from contregime.regimes.prespecified import DeterministicDynamicRegime, \
    NullRegime, PointMassRegime, StochasticRegime

VARIANTS = dict((cls.variant, cls) for cls in (
    NullRegime, PointMassRegime, DeterministicDynamicRegime, StochasticRegime,
    ShiftRegime, ThresholdRegime, IncrementalRegime))
PRESETS = {
    "always_treat": lambda: PointMassRegime(value=1.0),
    "never_treat": lambda: PointMassRegime(value=0.0),
}


def make_regime(variant, **params):
    """Builds a regime from its variant name and parameters

    :param variant: a key of VARIANTS or PRESETS
    :return BaseRegime
    """
    if variant in PRESETS:
        if params:
            raise InvalidArgumentError("preset %s takes no parameters"
                                       % variant)
        return PRESETS[variant]()
    if variant not in VARIANTS:
        raise InvalidArgumentError(
            "unknown regime variant %r (known: %s)"
            % (variant, ", ".join(sorted(set(VARIANTS) | set(PRESETS)))))
    cls = VARIANTS[variant]
    known = set(getattr(cls, "__dataclass_fields__", {})) - {"rule"}
    unknown = set(params) - known
    if unknown:
        raise InvalidArgumentError("unknown %s parameters %s"
                                   % (variant, sorted(unknown)))
    return cls(**dict((k, float(v)) for k, v in params.items()))


_CALL_RE = re.compile(r"^\s*([a-z_]+)\s*(?:\((.*)\))?\s*$")


def parse_regime(text):
    """Builds a regime from e.g. "shift(delta=0.5)" or "always_treat" """
    match = _CALL_RE.match(str(text))
    if not match:
        raise InvalidArgumentError("cannot parse regime %r" % (text,))
    variant, args = match.groups()
    params = {}
    for item in filter(None, (args or "").split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise InvalidArgumentError("regime arguments are key=value "
                                       "pairs, got %r" % (item,))
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise InvalidArgumentError("regime argument %s is not a number"
                                       % key.strip())
    return make_regime(variant, **params)


def regime_from_config(block):
    """Builds a regime from e.g. {variant = "shift", delta = 0.5}"""
    if "variant" not in block:
        raise InvalidArgumentError("regime block needs 'variant'")
    params = dict(block)
    return make_regime(params.pop("variant"), **params)


__all__ = ["BaseRegime", "density_ratio", "sample_regime", "NullRegime",
           "PointMassRegime", "DeterministicDynamicRegime",
           "StochasticRegime", "ShiftRegime", "ThresholdRegime",
           "IncrementalRegime", "VARIANTS", "PRESETS", "make_regime",
           "parse_regime", "regime_from_config"]
