import time

from fsk.parser import parse_poly as pp
from fsk.ring import PolyRing
from fsk.ideals import Hypersurface, Ideal
from fsk.extension import build_extension

T0 = time.time()


def tick(msg):
    print(f"[{time.time() - T0:8.2f}] {msg}", flush=True)


R = PolyRing(7, ("x", "y", "z"))
H = Hypersurface(R, pp(R, "x^3+y^3+z^3"))
m = Ideal(R, [pp(R, "x"), pp(R, "y"), pp(R, "z")])
tick("building domain extension for the cubic")
pres = build_extension(H, m, domain=True)
tick("build done")
print("ring:", pres.ring.names, "weights:", pres.ring.weights)
print("adjoined:", [(v.name, v.weight, v.free) for v in pres.adjoined])
print("injective:", pres.injective_certified)
print("n relations:", len(pres.relations.gens))
for g in pres.relations.gens:
    s = str(g)
    print("  rel:", s if len(s) < 150 else s[:150] + f"... ({len(g.coeffs)} terms)")
w = pres.witnesses[0]
print("witness: u =", w.u, " alpha =", w.alpha_num, "/", w.alpha_s,
      " w_s =", w.w_s, " root =", w.root)
print("w_num terms:", len(w.w_num.coeffs))
tick("done")
