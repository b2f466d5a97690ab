from .group import GroupSpecIn, ClassificationOut, PermGroupOut
from .colouring import ColouringCheck, ColouringOut
from .portrait import PortraitOut
from .report import (
    Verdict,
    QuotientOut,
    WitnessOut,
    CertificateStepOut,
    CertificateOut,
    AmalgamOut,
    WreathComparisonOut,
    VerificationOut,
    AnalysisReport,
)
from .job import JobSpec

__all__ = [
    'GroupSpecIn',
    'ClassificationOut',
    'PermGroupOut',
    'ColouringCheck',
    'ColouringOut',
    'PortraitOut',
    'Verdict',
    'QuotientOut',
    'WitnessOut',
    'CertificateStepOut',
    'CertificateOut',
    'AmalgamOut',
    'WreathComparisonOut',
    'VerificationOut',
    'AnalysisReport',
    'JobSpec',
]
