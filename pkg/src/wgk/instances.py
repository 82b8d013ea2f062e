"""
Concrete W-graph ideals: the regular module, the parabolic (Deodhar) modules,
Solomon modules and ideals below a determining element.

Every instance knows two seeds, one for each side of the duality, so that the
pair (M, Mt) can be realized together.  Instance names are parsed from short
strings such as ``regular``, ``deodhar:psi:J=s2``, ``deodhar:phi:J=s2:rel=empty``,
``solomon:J=s2`` or ``determining:w=s2.s1:J=s2:seed=phi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coxeter import CoxeterGroup, WeightFunction
from .hecke import HeckeAlgebra, HeckeElement
from .ideal import (SIDE_M, SIDE_MT, IdealData, ModuleRealization, build_ideal,
                    realize_from_seed)
from .linalg import NotFree, SpanBasis

__all__ = ["Instance", "regular_instance", "deodhar_instance", "solomon_instance",
           "determining_element_instance", "parse_instance", "CATALOG", "discover_F"]


@dataclass
class Instance:
    name: str
    kind: str
    H: HeckeAlgebra
    ideal: IdealData
    seed: HeckeElement
    dual_seed: HeckeElement
    params: dict = field(default_factory=dict)
    _rlz: dict = field(default_factory=dict, repr=False)

    @property
    def W(self) -> CoxeterGroup:
        return self.H.W

    def realize(self) -> ModuleRealization:
        if "seed" not in self._rlz:
            self._rlz["seed"] = realize_from_seed(self.ideal, self.H, self.seed)
        return self._rlz["seed"]

    def realize_dual(self) -> ModuleRealization:
        if "dual" not in self._rlz:
            if self.dual_seed == self.seed:
                self._rlz["dual"] = self.realize()
            else:
                self._rlz["dual"] = realize_from_seed(self.ideal, self.H, self.dual_seed)
        return self._rlz["dual"]

    def pair(self) -> tuple[ModuleRealization, ModuleRealization]:
        """(side-M realization, side-Mt realization)."""
        a, b = self.realize(), self.realize_dual()
        if a.self_dual and b.self_dual:
            return a, b
        if a.side == SIDE_M and b.side == SIDE_MT:
            return a, b
        if a.side == SIDE_MT and b.side == SIDE_M:
            return b, a
        raise ValueError(f"{self.name}: seeds do not realize opposite sides "
                         f"({a.side}, {b.side})")

    def describe(self) -> dict:
        W = self.W
        return {"name": self.name, "kind": self.kind, "group": W.name,
                "weights": self.H.L.to_config(W),
                "E": [W.word_str(w) for w in self.ideal.E],
                "J": sorted(W.gens[s] for s in self.ideal.J),
                **{k: v for k, v in self.params.items() if isinstance(v, (str, int, list))}}


def regular_instance(H: HeckeAlgebra) -> Instance:
    W = H.W
    ideal = build_ideal(W, W.elements, ())
    return Instance("regular", "regular", H, ideal, H.one(), H.one())


def deodhar_instance(H: HeckeAlgebra, J, variant: str = "psi",
                     relative: str = "J") -> Instance:
    """
    E = D_J with seed C'_{w_J} (psi) or C_{w_J} (phi), viewed as an ideal
    relative to J or to the empty set.
    """
    W = H.W
    J = frozenset(J)
    if variant not in ("psi", "phi"):
        raise ValueError(f"unknown Deodhar variant {variant!r}")
    C, Cp = H.parabolic_kl_elements(J)
    seed, dual = (Cp, C) if variant == "psi" else (C, Cp)
    E = W.parabolic(J).elements
    ideal = build_ideal(W, E, J if relative == "J" else ())
    Js = ".".join(W.gens[s] for s in sorted(J))
    name = f"deodhar:{variant}:J={Js}" + ("" if relative == "J" else ":rel=empty")
    return Instance(name, "deodhar_" + variant, H, ideal, seed, dual,
                    {"J": sorted(W.gens[s] for s in J), "variant": variant, "relative": relative})


def discover_F(H: HeckeAlgebra, seed: HeckeElement, J) -> list:
    """
    Grow a suffix-closed E inside D_J by length, adding sw whenever T_s Gamma_w
    is independent of the basis found so far.
    """
    W = H.W
    J = frozenset(J)

    def in_DJ(x):
        return not any(W.length[W.right[x][j]] < W.length[x] for j in J)

    basis = SpanBasis(H.rank)
    basis.add(0, seed.terms)
    gamma = {0: seed}
    E = [0]
    layer = [0]
    while layer:
        cands = {}
        for w in layer:
            for s in range(W.rank):
                u = W.left[w][s]
                if W.length[u] > W.length[w] and u not in gamma and in_DJ(u):
                    if all(W.left[u][t] in gamma for t in W.left_descents(u)):
                        cands.setdefault(u, (s, w))
        nxt = []
        for u in sorted(cands):
            s, w = cands[u]
            g = gamma[w].mul_ts_left(s)
            try:
                basis.add(u, g.terms)
            except NotFree:
                continue
            gamma[u] = g
            E.append(u)
            nxt.append(u)
        layer = nxt
    return sorted(E)


def solomon_instance(H: HeckeAlgebra, J, k_choice: str = "J") -> Instance:
    """
    Seed C_{w_K} C'_{w_K^} with K = J, K^ = S minus J (``k_choice="J"``) or the
    complementary assignment (``"complement"``); the dual seed swaps C and C'.
    """
    W = H.W
    J = frozenset(J)
    rest = frozenset(range(W.rank)) - J
    K, Kh = (J, rest) if k_choice == "J" else (rest, J)
    CK, CpK = H.parabolic_kl_elements(K)
    CKh, CpKh = H.parabolic_kl_elements(Kh)
    seed = CK * CpKh
    dual = CpK * CKh
    E = discover_F(H, seed, J)
    ideal = build_ideal(W, E, J)
    Js = ".".join(W.gens[s] for s in sorted(J))
    name = f"solomon:J={Js}" + ("" if k_choice == "J" else ":K=complement")
    return Instance(name, "solomon", H, ideal, seed, dual,
                    {"J": sorted(W.gens[s] for s in J), "K": sorted(W.gens[s] for s in K),
                     "K_hat": sorted(W.gens[s] for s in Kh), "k_choice": k_choice})


def determining_element_instance(H: HeckeAlgebra, w: int, J, seed: str = "regular") -> Instance:
    """E = {u : u <=_L w} relative to J, with seed T_1 or a parabolic seed on J."""
    W = H.W
    J = frozenset(J)
    E = W.weak_ideal(w)
    ideal = build_ideal(W, E, J)
    if seed == "regular":
        s0 = d0 = H.one()
    else:
        C, Cp = H.parabolic_kl_elements(J)
        s0, d0 = (Cp, C) if seed == "psi" else (C, Cp)
    Js = ".".join(W.gens[s] for s in sorted(J))
    return Instance(f"determining:w={W.word_str(w)}:J={Js}:seed={seed}", "determining_element",
                    H, ideal, s0, d0, {"w": W.word_str(w), "J": sorted(W.gens[s] for s in J),
                                       "seed": seed})


def _parse_gens(W, text):
    text = text.strip()
    if text in ("", "-", "none"):
        return frozenset()
    return W.parse_gens(text.replace(".", ",").split(","))


def parse_instance(name: str, H: HeckeAlgebra) -> Instance:
    """Build an instance from its catalog name."""
    W = H.W
    parts = name.split(":")
    head, opts = parts[0], {}
    flags = []
    for p in parts[1:]:
        if "=" in p:
            k, v = p.split("=", 1)
            opts[k] = v
        else:
            flags.append(p)
    if head == "regular":
        return regular_instance(H)
    if head == "deodhar":
        variant = flags[0] if flags else opts.get("variant", "psi")
        return deodhar_instance(H, _parse_gens(W, opts.get("J", "")), variant,
                                "empty" if opts.get("rel") in ("empty", "0", "none") else "J")
    if head == "solomon":
        return solomon_instance(H, _parse_gens(W, opts.get("J", "")),
                                "complement" if opts.get("K") == "complement" else "J")
    if head == "determining":
        w = W.parse_word(opts["w"]) if opts.get("w") not in (None, "w0") else W.longest_element()
        return determining_element_instance(H, w, _parse_gens(W, opts.get("J", "")),
                                            opts.get("seed", "regular"))
    raise ValueError(f"unknown instance {name!r}")


# name -> (group, weights, instance)
CATALOG = {
    "A1-regular": ("A1", "1", "regular"),
    "A2-regular": ("A2", "equal", "regular"),
    "B2-regular": ("B2", "equal", "regular"),
    "B2-regular-12": ("B2", "1,2", "regular"),
    "A3-regular": ("A3", "equal", "regular"),
    "I2(5)-regular": ("I2(5)", "equal", "regular"),
    "G2-regular-12": ("G2", "1,2", "regular"),
    "B3-regular": ("B3", "equal", "regular"),
    "A2-deodhar-psi-s2": ("A2", "equal", "deodhar:psi:J=s2"),
    "A2-deodhar-phi-s2": ("A2", "equal", "deodhar:phi:J=s2"),
    "A2-deodhar-psi-s2-empty": ("A2", "equal", "deodhar:psi:J=s2:rel=empty"),
    "B2-deodhar-psi-s1": ("B2", "1,2", "deodhar:psi:J=s1"),
    "B2-deodhar-phi-s2": ("B2", "1,2", "deodhar:phi:J=s2"),
    "A3-deodhar-phi-s1.s2": ("A3", "equal", "deodhar:phi:J=s1.s2"),
    "A2-solomon-s2": ("A2", "equal", "solomon:J=s2"),
    "B2-solomon-s1-12": ("B2", "1,2", "solomon:J=s1"),
    "A3-solomon-s2": ("A3", "equal", "solomon:J=s2"),
    "A2-determining-w0": ("A2", "equal", "determining:w=w0:J="),
    "A2-determining-s2.s1": ("A2", "equal", "determining:w=s2.s1:J=s2:seed=phi"),
}
