"""Quick end-to-end check of the Python bindings."""

import json

import lmrd

f2 = lmrd.Field(2)
assert f2.mul(1, 1) == 1

f4 = lmrd.Field(4)
assert all(f4.mul(a, f4.inv(a)) == 1 for a in range(1, 4))

assert lmrd.q_binomial(4, 2, 2) == 35
assert len(lmrd.grassmannian(f2, 4, 2)) == 35

u = lmrd.Subspace(f2, [[1, 0, 0, 0], [0, 1, 0, 0]])
w = lmrd.Subspace(f2, [[0, 0, 1, 0], [0, 0, 0, 1]])
assert u.distance(w) == 4
assert u.intersection(w).dim == 0
assert u.orthogonal_complement() == w

g = lmrd.gabidulin(f2, 4, 4, 3)
assert g.size == 2 ** 8
assert g.min_rank_distance() == 3

lmrd_code = lmrd.standard_lmrd(f2, 6, 3, 4)
assert len(lmrd_code) == 64
assert lmrd_code.verify().min_distance == 4

c = lmrd.family_6l(f2, 1)
ver = c.verify()
assert (len(c), ver.min_distance, ver.ok) == (71, 4, True)
assert len(lmrd.Cdc.from_text(c.to_text())) == 71

b = lmrd.lmrd_upper_bound(2, 10, 6, 5)
assert b.value == 32923, b
assert json.loads(b.json)["value"] == "32923"
assert lmrd.upper_bound(2, 7, 6, 3).value == 17
assert lmrd.lmrd_upper_bound(2, 12, 4, 6) is None
assert lmrd.prop1_bound(2, 11, 6, 4).value == 2 ** 14 + 381
assert lmrd.st_cap(2, 10, 6, 5, 3).value == 155

e = lmrd.Cdc(f2, 5, 3, 2, lmrd.grassmannian(f2, 5, 3))
ext, per_restart = lmrd.extend_lmrd(e, 10, 5, 6, n_max=2, r_max=10, seed=7)
again, _ = lmrd.extend_lmrd(e, 10, 5, 6, n_max=2, r_max=10, seed=7)
assert ext.codewords() == again.codewords()
assert len(ext) == max(per_restart) <= 155
full = lmrd.standard_lmrd(f2, 10, 5, 6).union(ext)
assert full.verify().min_distance == 6

print("smoke test ok:", c, b, ext)
