from fractions import Fraction

from hypothesis import strategies as st


def probabilities():
    return st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(999, 1000), max_denominator=1000).filter(
        lambda p: 0 < p < 1
    )


def messages(max_size=40):
    return st.text(alphabet="01", max_size=max_size)
