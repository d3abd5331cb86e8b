"""
Explicit (k+2, k) distributed storage code over GF(3) built from Sylvester
Hadamard designs, with bandwidth-optimal systematic repair.
"""

from .code import PARITY_A, PARITY_B, CodeParams, NodeContent, NodeId, Role, as_survivors, encode, gamma, make_code, repair_matrix
from .exceptions import *  # noqa: F401,F403
from .reconstruct import can_tolerate, decodability, reconstruct_file, recover_failures
from .repair import RepairTranscript, interference_rank_report, pairing, repair_parity, repair_systematic

__version__ = "0.1.0"
