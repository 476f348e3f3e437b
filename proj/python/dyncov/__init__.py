"""Dynamic coverage of mobile sensor networks.

Closed-form laws for area coverage, intrusion detection times, sensing-time
effects, and the sensor-vs-intruder mobility game, together with the Monte
Carlo engine that verifies them. The heavy lifting lives in the compiled
`_dyncov` extension.
"""

from ._dyncov import (  # noqa: F401
    DirectionDistribution,
    IntruderSpec,
    NetworkConfig,
    SpeedDistribution,
    __version__,
    analytic,
    game,
    sim,
    stats,
)

__all__ = [
    "DirectionDistribution",
    "IntruderSpec",
    "NetworkConfig",
    "SpeedDistribution",
    "analytic",
    "game",
    "sim",
    "stats",
    "__version__",
]
