"""Quick check of the fran_tradeoff extension after `maturin develop`."""
import csv
import io
import math

import fran_tradeoff as ft

s = ft.Scenario()
print(s)
assert s.k > 0.0
assert 0.0 < s.hit_probability < 1.0

# Closed form at alpha = 4.
d = 1.0
assert abs(ft.rho(d, 4.0) - math.sqrt(d) * math.atan(math.sqrt(d))) < 1e-8

sp = ft.success_prob_max_rsrp(s, 1.0)
assert abs(sp["a_f"] - 0.5) < 1e-12
assert 0.0 < sp["total"] < 1.0

print("rate", ft.ergodic_rate_max_rsrp(s)["rate"])
print("latency max_rsrp", ft.latency_max_rsrp(s))
eq = ft.min_delay_equilibrium(s)
assert abs(sum(eq["assoc"]) - 1.0) < 1e-9

m = ft.estimate_metrics(s, "max_rsrp", 200, 1)
mean, se, n = m["assoc|tier=F"]
assert n == 200 and abs(mean - 0.5) < 0.2

assert ft.validate_toml("[network]\nalpha = 1.5\n")
try:
    ft.Scenario("[network]\nalpha = 1.5\n")
except ValueError:
    pass
else:
    raise AssertionError("bad alpha accepted")

text = ft.run_sweep("fig3")
lines = text.splitlines()
assert lines[0].startswith("# fran-tradeoff-csv schema=1")
rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
assert rows and set(rows[0]) >= {"swept_value", "metric", "value"}
print("ok:", len(rows), "fig3 rows")
