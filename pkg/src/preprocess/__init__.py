"""Preprocess: sessions, significant stays and active users."""

from src.preprocess.activity import activity_profile, filter_active_users, required_days, visit_days
from src.preprocess.sessions import SessionPairer, extract_stays, pair_sessions

__all__ = [
    "SessionPairer",
    "activity_profile",
    "extract_stays",
    "filter_active_users",
    "pair_sessions",
    "required_days",
    "visit_days",
]
