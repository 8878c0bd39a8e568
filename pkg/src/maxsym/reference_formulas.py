"""Classical printed formulas used as golden cross-checks.

These are the characterizing relations and canonical-form coefficients
as they appear in the literature on linear equations with maximal
symmetry algebras.  The machinery is compared against them; whenever a
printed formula disagrees with the self-consistency oracle, the
discrepancy is reported as an erratum instead of silently passing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .diffalg import DiffRatio
from .parsing import parse_value

# Characterizing relations as printed, moved to "... = 0" form.
# Stored as (j, relation-text) with j descending from n-3 to 0.
CHARACTERIZING_TEXT = {
    3: [
        (0, "54*c0 - 18*c1*c2 + 4*c2^3 - 27*c1' + 18*c2*c2' + 9*c2''"),
    ],
    4: [
        (1, "8*c1 - (4*c2*c3 - c3^3 + 8*c2' - 6*c3*c3' - 4*c3'')"),
        (
            0,
            "1600*c0 - (144*c2^2 - 11*c3^4 + 400*c3*c2' - 288*c3^2*c3'"
            " - 336*c3'^2 - 8*c2*(c3^2 + 4*c3') + 480*c2'' - 560*c3*c3''"
            " - 320*c3''')",
        ),
    ],
    5: [
        (2, "50*c2 - (30*c3*c4 - 8*c4^3 + 75*c3' - 60*c4*c4' + 50*c4'')"),
        (
            1,
            "1250*c1 - (200*c3^2 - 18*c4^4 + 750*c4*c3' - 580*c4^2*c4'"
            " - 850*c4'^2 - 10*c3*(c4^2 + 5*c4') + 1125*c3''"
            " - 1400*c4*c4'' - 1000*c4''')",
        ),
        (
            0,
            "6250*c0 - (200*c3^2*c4 + 14*c4^5 - 25*c4^2*c3' + 40*c4^3*c4'"
            " - 125*c3'*c4' - 750*c4*c4'^2 + 1125*c4*c3'' - 850*c4^2*c4''"
            " - 2750*c4'*c4'' + 1250*c3''' - 2000*c4*c4''' - 1250*c4^(4)"
            " - 10*c3*(11*c4^3 + 100*c3' - 85*c4*c4' - 75*c4''))",
        ),
    ],
}

# Reduced normal forms in the single function a, orders three to five.
A_FAMILY_TEXT = {
    3: {1: "a", 0: "a'/2"},
    4: {2: "a", 1: "a'", 0: "3/10*a'' + 9/100*a^2"},
    5: {
        3: "a",
        2: "3/2*a'",
        1: "9/10*a'' + 16/100*a^2",
        0: "1/5*a''' + 16/100*a*a'",
    },
}

# The fourth-order reduced normal form of the maximal-symmetry family,
# expressed back in c_2, c_3 (the "Q" block).
NOR4STD4_TEXT = {
    2: "c2 - 3/8*(c3^2 + 4*c3')",
    1: "c2' - 3/4*(c3*c3' + 2*c3'')",
    0: "3/6400*(192*c2^2 + 27*c3^4 - 48*c3'^2 - 144*c2*(c3^2 + 4*c3'))"
    " + 3/6400*(27*c3^4 + 216*c3^2*c3' + 640*c2'' - 480*c3*c3'' - 960*c3''')",
}

# Induced generator of the fourth-order maximal-symmetry family.
MAXSYM4_PHI_TEXT = {
    3: "-c3*f' - 4*g' + 6*f''",
    2: "-2*c2*f' - 3*c3*g' + 3*c3*f'' - 6*g'' + 4*f'''",
    1: "3/8*f'*(c3^3 - 8*c2' + 6*c3*c3' + 4*c3'') - 3*c3*g'' + c3*f'''"
    " + c2*(-3/2*c3*f' - 2*g' + f'') - 4*g''' + f^(4)",
    0: "-1/8*g'*(8*c2' - c3*(-4*c2 + c3^2 + 6*c3') - 4*c3'') - c2*g''"
    " - c3*g''' - g^(4)"
    " - 1/400*f'*(144*c2^2 - 11*c3^4 - 288*c3^2*c3' - 8*c2*(c3^2 + 4*c3')"
    " - 80*c3*(5*c2' - 7*c3'') + 16*(21*c3'^2 - 30*c2'' + 20*c3'''))",
}

#: quoted constant in the J-defect factorization J(Q) - f'^4 J(C)
#: = K (g'/g) f'^3 I_4(C); consistent only with J scaled by 200, while
#: J itself is defined with the 1600 normalization.
PRINTED_J_CONSTANT = Fraction(-200)


@dataclass(frozen=True)
class Erratum:
    """A machine-detected discrepancy between the verified machinery and
    a printed formula."""

    source: str
    detail: str

    def __str__(self):
        return f"ERRATUM [{self.source}]: {self.detail}"


def characterizing_printed(n: int):
    """Printed relations for order n as exact polynomials (unnormalized,
    exactly as written)."""
    out = []
    for _, text in CHARACTERIZING_TEXT[n]:
        out.append(DiffRatio.of(parse_value(text)).as_poly())
    return out


def compare_characterizations(n: int):
    """Compare computed relations with the printed ones; returns a list
    of (j, matches, defect) triples."""
    from .odeforms import characterize

    cs = characterize(n)
    results = []
    for (j, text), computed in zip(CHARACTERIZING_TEXT[n], cs.relations):
        printed = DiffRatio.of(parse_value(text)).as_poly()
        defect = printed - computed
        results.append((j, defect.is_zero(), defect))
    return results
