from hypothesis import strategies as st

from plane_blowups.lattice import DivisorClass


def classes(r, lo=-12, hi=12):
    return st.lists(st.integers(lo, hi), min_size=r + 1, max_size=r + 1).map(DivisorClass.from_vector)


@st.composite
def same_rank_classes(draw, n=2, max_r=10):
    r = draw(st.integers(0, max_r))
    return r, [draw(classes(r)) for _ in range(n)]
