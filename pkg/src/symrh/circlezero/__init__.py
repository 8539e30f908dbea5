"""Root location for the period polynomials: circle and disk certificates, Rouche margins."""

from .certificate import CIRCLE_VERDICTS, DISK_VERDICTS, ZeroCertificate
from .circle import (
    GRID_CAP,
    CircleFunction,
    NotSelfInversiveError,
    certify_on_circle,
    count_sign_changes,
    self_inversive_violations,
)
from .disk import DiskResult, certify_in_disk, disk_certificate, disk_from_roots, schur_cohn
from .roots import RootFindingError, RootSet, find_roots, newton_polygon_starts
from .rouche import RoucheReport, rouche_margin
from .selfinv import PreconditionError, lalin_smyth_construct, planted_h, roots_in_closed_disk

__all__ = [
    "CIRCLE_VERDICTS",
    "DISK_VERDICTS",
    "GRID_CAP",
    "CircleFunction",
    "DiskResult",
    "NotSelfInversiveError",
    "PreconditionError",
    "RootFindingError",
    "RootSet",
    "RoucheReport",
    "ZeroCertificate",
    "certify_in_disk",
    "certify_on_circle",
    "disk_certificate",
    "count_sign_changes",
    "disk_from_roots",
    "find_roots",
    "lalin_smyth_construct",
    "newton_polygon_starts",
    "planted_h",
    "rouche_margin",
    "roots_in_closed_disk",
    "schur_cohn",
    "self_inversive_violations",
]
