from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from ietshrink.iet import Iet, is_irreducible

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def rational_iets(draw, d_min=2, d_max=5, q_max=10**4):
    d = draw(st.integers(d_min, d_max))
    Q = draw(st.integers(d, q_max))
    cuts = sorted(draw(st.sets(st.integers(1, Q - 1), min_size=d - 1, max_size=d - 1)))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [Q])]
    perm = draw(st.permutations(range(1, d + 1)).filter(is_irreducible))
    return Iet(tuple(Fraction(k, Q) for k in parts), tuple(perm))


def fractions_in(lo=0, hi=1, max_den=1000):
    return st.builds(
        lambda n, d: lo + (hi - lo) * Fraction(n % d, d),
        st.integers(0, 10**6),
        st.integers(1, max_den),
    )
