"""gaskit: a threshold group-authentication toolkit.

Implements a lightweight group authentication and key agreement scheme
(Shamir secret sharing over an elliptic-curve group plus ECDH pairwise
keys), the Harn asynchronous scheme as an executable baseline, an
analytical cost model, a deterministic wireless-group simulator, and an
adversary scenario harness.
"""

__version__ = "0.1.0"

from . import attacks, cost_model, ec, field, gas_core, gas_harn, sim, sss, wire  # noqa: F401
