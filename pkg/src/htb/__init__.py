"""Head/Tail breaks classification."""

from src.htb.breaks import HEAD_LIMIT, head_tail_breaks
from src.htb.classify import classify_cohort, classify_tables, classify_user, group_cohort

__all__ = ["HEAD_LIMIT", "classify_cohort", "classify_tables", "classify_user", "group_cohort", "head_tail_breaks"]
