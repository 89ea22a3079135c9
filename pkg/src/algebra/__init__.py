"""Exact construction of sl(m,n), C(m), their loop quotients and modules."""
