"""Discrete metric measure spaces: comparison checks, cut points, Poincare and dimension estimates."""

from ._mmspace import (
    BudgetError,
    DomainError,
    Error,
    ParameterError,
    ParseError,
    Space,
    SpaceError,
    __version__,
    check_bg,
    covering_number,
    cut_profile,
    delta_threshold,
    diam_check,
    dimension_estimate,
    ends_at_scale,
    estimate_cp,
    estimate_min_c,
    find_local_cut_points,
    gamma,
    gh_distance,
    is_r_cut_point,
    run,
    unit_ball_volume,
    volume,
    volume_decay_exponent,
    zoo_families,
)


def theorem_suite(source, **options):
    """Run every theorem record on a zoo string or space file; returns (status, report)."""
    return run("theorem-suite", source, **options)


__all__ = [name for name in dir() if not name.startswith("_")]
