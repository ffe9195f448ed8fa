import faulthandler
import time

faulthandler.enable()
faulthandler.dump_traceback_later(60, repeat=True)

from fsk.parser import parse_poly as pp
from fsk.ring import PolyRing
from fsk.ideals import Hypersurface, Ideal
from fsk.frobenius import FrobeniusDatum
from fsk.compatible import enumerate_compatible_primes
from fsk.primes import minimal_primes
from fsk.cech import socle_datum, adjust_u, solve_coboundary
from fsk.extension import (ExtensionPresentation, choose_parameters,
                           component_height, _stage, _lift,
                           _normal_certified, adjoin_root,
                           _injectivity_certificate, LiftedCochain)
from dataclasses import replace

T0 = time.time()


def tick(msg):
    print(f"[{time.time() - T0:8.2f}] {msg}", flush=True)


R = PolyRing(7, ("x", "y", "z"))
H = Hypersurface(R, pp(R, "x^3+y^3+z^3"))
m = Ideal(R, [pp(R, "x"), pp(R, "y"), pp(R, "z")])
datum0 = FrobeniusDatum.fedder(H)
I = H.ideal(list(m.gens))
comps = sorted(minimal_primes(I), key=lambda q: q._key())
Qs = [Q for Q in enumerate_compatible_primes(datum0) if not Q.contains_ideal(I)]
tick(f"primes/Qs done comps={len(comps)} Qs={len(Qs)}")
params_all = choose_parameters(H, comps, Qs)
tick(f"params {[str(z) for z in params_all]}")
P = comps[0]
h = component_height(H, P)
sd = socle_datum(H, P, params_all[:h], s_bound=49)
sd = adjust_u(sd, comps, Qs)
tick(f"socle alpha={sd.alpha.entries[0].numerator}/{sd.alpha.entries[0].denom} u={sd.u}")
beta = solve_coboundary([(7, R.one()), (1, -sd.u)], sd.alpha, s_bound=49)
tick("coboundary done")

pres = ExtensionPresentation(base=H, ring=R, relations=Ideal(R, [H.f]),
                             avoid=tuple(Qs), domain_mode=True)
state = {"kind": "normal" if _normal_certified(pres) else "opaque",
         "D": None, "collapsed": 0, "deep": 0}
tick(f"base state {state['kind']}")

d = sd.context.d
nums, ss = [], []
for i in range(d):
    sub = tuple(t for t in range(d) if t != i)
    entry = beta.entry(sub)
    t1 = time.time()
    pres, num, s_i, var = _stage(pres, sd, entry, f"T_1_{i+1}", 0, True, state)
    nums.append(num)
    ss.append(s_i)
    tick(f"stage {i} done in {time.time()-t1:.2f}s kind={state['kind']} "
         f"collapsed={state['collapsed']} deep={state['deep']}")
    tick(f"  ring={pres.ring.names} nrel={len(pres.relations.gens)}")
    for v in pres.adjoined:
        tick(f"  var {v.name} free={v.free} pin_den={v.pin_den}")

import fsk.extension as ext
from fsk.groebner import syzygy_kernel as SK


def sk_stats(cols, ring=None):
    nc, nq = len(cols), len(cols[0])
    degs, terms = [0], [0]
    for vec in cols:
        for e in vec:
            if not e.is_zero():
                degs.append(int(e.exps.sum(axis=1).max()))
                terms.append(len(e.coeffs))
    tick(f"syzygy: {nc} cols x {nq} rows, maxdeg={max(degs)} "
         f"maxterms={max(terms)} totterms={sum(terms)}")
    t = time.time()
    out = SK(cols, ring=ring)
    tick(f"syzygy kernel done {time.time()-t:.2f}s n={len(out)}")
    return out


ext.syzygy_kernel = sk_stats

nums = [_lift(n, pres.ring) for n in nums]
bbar = LiftedCochain(nums=tuple(nums), ss=tuple(ss))
t1 = time.time()
ring1, relations, var, c, s_star = adjoin_root(pres, sd, bbar, "T")
tick(f"adjoin_root done in {time.time()-t1:.2f}s ngens={len(relations.gens)}")
tick(f"  c={c} svec={s_star}")
tick(f"  w pin: num={var.pin_num} den={var.pin_den}")
for g in relations.canonical():
    print("   rel:", g)

var = replace(var, component=0)
pres = ExtensionPresentation(
    base=H, ring=ring1, relations=relations,
    adjoined=pres.adjoined + (var,), witnesses=pres.witnesses,
    avoid=pres.avoid, killed=pres.killed, domain_mode=True)
t1 = time.time()
ok = _injectivity_certificate(pres)
tick(f"injectivity certificate in {time.time()-t1:.2f}s -> {ok}")
