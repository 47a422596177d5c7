"""Run the full oracle/identity verification suite and print the scoreboard.

Same checks as `kdvlri verify`; this script is the library-call version.

Run: python3 demos/verify_oracles.py
"""

import time

from kdvlri.oracles import verification_suite

t0 = time.perf_counter()
results = verification_suite()
wall = time.perf_counter() - t0

width = max(len(r.check_name) for r in results)
for r in results:
    tag = "PASS" if r.passed else "FAIL"
    print(f"{tag}  {r.check_name:<{width}}  residual {r.residual:.3e}  "
          f"(tolerance {r.tolerance:.3e})")

n_pass = sum(r.passed for r in results)
print(f"\n{n_pass}/{len(results)} checks passed in {wall:.1f}s")
