import math

from hypothesis import settings

settings.register_profile("suite", max_examples=40, deadline=None)
settings.load_profile("suite")


def central_difference(fn, x, order, h=0.05):
    """High-order central finite differences, order 1..4 (test-side oracle)."""
    stencils = {
        1: ((-1 / 60, 3 / 20, -3 / 4, 0.0, 3 / 4, -3 / 20, 1 / 60), 1),
        2: ((1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90), 2),
        3: ((1 / 8, -1.0, 13 / 8, 0.0, -13 / 8, 1.0, -1 / 8), 3),
        4: ((-1 / 6, 2.0, -13 / 2, 28 / 3, -13 / 2, 2.0, -1 / 6), 4),
    }
    coeffs, p = stencils[order]
    acc = 0.0
    for j, c in enumerate(coeffs):
        if c != 0.0:
            acc += c * fn(x + (j - 3) * h)
    return acc / h ** p


def rel_err(value, reference):
    return abs(value - reference) / max(abs(reference), 1e-300)


assert math.isclose(central_difference(math.sin, 0.3, 1), math.cos(0.3),
                    rel_tol=1e-9)
