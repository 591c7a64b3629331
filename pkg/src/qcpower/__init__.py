"""Quantum discord, one-way deficit and the quantum-correlating power of qubit channels."""

from .channels import KrausChannel, amplitude_damping, max_qcp_channel, phase_damping
from .correlations import deficit_BA, discord_BA
from .qcore import ConsistencyError
from .qcp import qcp_ad_deficit, qcp_ad_discord, qcp_numeric

__all__ = [
    "ConsistencyError",
    "KrausChannel",
    "amplitude_damping",
    "deficit_BA",
    "discord_BA",
    "max_qcp_channel",
    "phase_damping",
    "qcp_ad_deficit",
    "qcp_ad_discord",
    "qcp_numeric",
]

__version__ = "0.1.0"
