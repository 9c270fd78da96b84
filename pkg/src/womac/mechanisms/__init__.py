"""Competition mechanisms: standard, oracular and WOMAC."""

from womac.mechanisms.config import WomacConfig, TopKAverage, LeastSquares, OracleVector
from womac.mechanisms.standard import run_standard, run_oracular
from womac.mechanisms.womac import run_womac, womac_score_only, womac_references

__all__ = [
    'WomacConfig',
    'TopKAverage',
    'LeastSquares',
    'OracleVector',
    'run_standard',
    'run_oracular',
    'run_womac',
    'womac_score_only',
    'womac_references',
]
