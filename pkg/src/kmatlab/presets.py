"""Named scenario presets: each bundles a Satake datum, coideal
parameters, and a list of desk-scale modules so the verification suites
and the CLI can refer to configurations by name."""

from dataclasses import dataclass
from fractions import Fraction

from .scalars import ScalarField, RatField
from .cartan import RootDatum, SatakeDatum
from .modules import irrep, evaluation_sl2hat


class PresetError(Exception):
    pass


def embed_const(dom, s):
    """Embed a ground-field scalar through any tower of rational function
    fields over it."""
    if isinstance(dom, RatField):
        return dom.const(embed_const(dom.base, s))
    return s


@dataclass(frozen=True)
class Preset:
    name: str
    kind: str  # "finite" or "spectral"
    description: str

    def build(self):
        return _BUILDERS[self.name]()


def _split_sl2():
    rd = RootDatum.finite("A", 1)
    sf = ScalarField(rd.D)
    sd = SatakeDatum(rd, (), (0,))
    gamma = {0: sf.one}
    V = irrep(rd, sf, rd.fundamental(0), label="V(w)")
    W = irrep(rd, sf, [Fraction(2)], label="V(2w)")
    return {"sd": sd, "sfield": sf, "gamma": gamma, "sigma": None,
            "gamma_classical": {0: Fraction(1)},
            "modules": [V, W], "pairs": [(0, 1), (0, 0)],
            "tensor_triples": [(0, 1, 0)]}


def _sl3_aiv():
    rd = RootDatum.finite("A", 2)
    sf = ScalarField(rd.D)
    sd = SatakeDatum(rd, (), (1, 0))
    gamma = {0: sf.one, 1: sf.one}
    Va = irrep(rd, sf, rd.fundamental(0), label="V(w1)")
    Vb = irrep(rd, sf, rd.fundamental(1), label="V(w2)")
    Vab = irrep(rd, sf, rd.wt_add(rd.fundamental(0), rd.fundamental(1)),
                label="V(w1+w2)")
    return {"sd": sd, "sfield": sf, "gamma": gamma, "sigma": None,
            "gamma_classical": {0: Fraction(1), 1: Fraction(1)},
            "modules": [Va, Vb, Vab], "pairs": [(0, 1), (1, 0)],
            "tensor_triples": [(0, 1, 0)]}


def _sl3_aiii():
    # X is the whole classical diagram; tau restricted to X must be its
    # opposition involution, so tau is the flip.  The quasi K-matrix is
    # the identity here and every identity in the suite is still checked.
    rd = RootDatum.finite("A", 2)
    sf = ScalarField(rd.D)
    sd = SatakeDatum(rd, (0, 1), (1, 0))
    Va = irrep(rd, sf, rd.fundamental(0), label="V(w1)")
    Vb = irrep(rd, sf, rd.fundamental(1), label="V(w2)")
    return {"sd": sd, "sfield": sf, "gamma": {}, "sigma": None,
            "gamma_classical": {},
            "modules": [Va, Vb], "pairs": [(0, 1)],
            "tensor_triples": [(0, 1, 0)]}


def _affine_common(tau, sigma_on):
    rd = RootDatum.affine_sl2()
    sf = ScalarField(rd.D)
    sd = SatakeDatum(rd, (), tau)
    q = sf.q
    gamma = {0: q * q, 1: sf.one / (q * q)}
    sigma = {0: sf.one, 1: sf.one} if sigma_on else None

    def make(n, a):
        def f(dom):
            if dom is None:
                dom = RatField(sf, "z")
            return evaluation_sl2hat(rd, sf, n,
                                     embed_const(dom, sf.q_pow(a)),
                                     domain=dom)
        return f

    return {"sd": sd, "sfield": sf, "gamma": gamma, "sigma": sigma,
            "make_M": make(1, 3), "make_V": make(1, 1), "make_W": make(1, 1),
            "eval_params": (3, 1)}


def _qonsager():
    return _affine_common((0, 1), True)


def _aug_qonsager():
    return _affine_common((1, 0), False)


_BUILDERS = {
    "split-sl2": _split_sl2,
    "sl3-aiv": _sl3_aiv,
    "sl3-aiii": _sl3_aiii,
    "qonsager": _qonsager,
    "aug-qonsager": _aug_qonsager,
}

PRESETS = {
    "split-sl2": Preset("split-sl2", "finite",
                        "rank one, X empty, identity involution"),
    "sl3-aiv": Preset("sl3-aiv", "finite",
                      "rank two, X empty, diagram flip"),
    "sl3-aiii": Preset("sl3-aiii", "finite",
                       "rank two, X the whole diagram, diagram flip"),
    "qonsager": Preset("qonsager", "spectral",
                       "affine rank one, identity involution, "
                       "sigma-deformed"),
    "aug-qonsager": Preset("aug-qonsager", "spectral",
                           "affine rank one, diagram flip"),
}


def get_preset(name):
    try:
        return PRESETS[name]
    except KeyError:
        raise PresetError(f"unknown preset {name!r}; choose from "
                          + ", ".join(sorted(PRESETS)))
