"""Numerical tolerances, read from ``settings.BILLIARDS``."""

import contextvars
from contextlib import contextmanager
from dataclasses import dataclass, fields, replace

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured


@dataclass(frozen=True)
class Tolerances:
    geometric_tol: float = 1e-9
    matrix_tol: float = 1e-10
    solver_tol: float = 1e-12
    angle_tol: float = 1e-8
    trace_tol: float = 1e-9
    snap_tol: float = 1e-9
    newton_max_iter: int = 100
    newton_fd_step: float = 1e-7
    segment_samples: int = 32
    penalty: float = 1e6
    random_starts: int = 8
    default_seed: int = 0


_override = contextvars.ContextVar('billiards_tolerances', default=None)


def _from_settings() -> Tolerances:
    try:
        configured = getattr(settings, 'BILLIARDS', {})
    except ImproperlyConfigured:
        # library used outside a Django project
        configured = {}
    known = {f.name for f in fields(Tolerances)}
    values = {key.lower(): value for key, value in configured.items() if key.lower() in known}
    return Tolerances(**values)


def tolerances() -> Tolerances:
    current = _override.get()
    if current is not None:
        return current
    return _from_settings()


@contextmanager
def override_tolerances(**changes):
    """Temporarily replace some tolerances, e.g. ``override_tolerances(geometric_tol=1e-8)``."""
    token = _override.set(replace(tolerances(), **changes))
    try:
        yield _override.get()
    finally:
        _override.reset(token)
