"""Secure hierarchical majority-vote aggregation for sign-based federated learning."""

from hisafe.field import FieldElement, PrimeModulus, from_signed, smallest_prime_gt, to_centered
from hisafe.hierarchy import A1, B1, SubgroupLayout, TieConfig, leakage_census, partition, run_hierarchical_round
from hisafe.mvpoly import MvPolynomial, PowerSchedule, TiePolicy, construct_mv_polynomial, evaluate, power_schedule
from hisafe.protocol import ProtocolError, ProtocolTranscript, run_flat_round
from hisafe.sharing import BeaverTripleSet, DealerConfig, deal_additive_shares, deal_beaver_triples

__all__ = [
    "A1",
    "B1",
    "BeaverTripleSet",
    "DealerConfig",
    "FieldElement",
    "MvPolynomial",
    "PowerSchedule",
    "PrimeModulus",
    "ProtocolError",
    "ProtocolTranscript",
    "SubgroupLayout",
    "TieConfig",
    "TiePolicy",
    "construct_mv_polynomial",
    "deal_additive_shares",
    "deal_beaver_triples",
    "evaluate",
    "from_signed",
    "leakage_census",
    "partition",
    "power_schedule",
    "run_flat_round",
    "run_hierarchical_round",
    "smallest_prime_gt",
    "to_centered",
]

__version__ = "0.1.0"
