"""Defining a PDE system from operator text.

Each entry of ``F1`` and ``F2`` is a string over the coordinates ``x1, x2``
of the current copy and ``w1, w2`` of the second copy in a product. Every
``w`` must be removed by ``delta``, ``int`` or ``cumint``.
"""

import numpy as np

from carleman.models import BurgersParams, burgers_system
from carleman.opdsl import CompileError, ParseError, compile_operator, parse_operator, pretty
from carleman.pde import GridSpec, PDEQuadraticSystem

source = "mu * d2/dx1^2"
tree = parse_operator(source)
print(f"{source!r} parses to {tree}")
print(f"and prints back as {pretty(tree)!r}")

grid = GridSpec.periodic(24)
system = PDEQuadraticSystem(
    grid, 1, None,
    [[compile_operator(source, grid, {"mu": 0.3})]],
    [[compile_operator("-delta(w1=x1) * d/dx1", grid)]],
)
u = np.sin(grid.axes[0].nodes)
hand = burgers_system(BurgersParams(0.3, grid)).vector_field(u)
print(f"DSL Burgers vs built-in: {np.max(np.abs(system.vector_field(u) - hand)):.1e}")

for bad in ("d2/dx1^3", "d/dx1 * d/dw1", "nu * d/dx1"):
    try:
        compile_operator(bad, grid)
    except ParseError as exc:
        print(f"{bad!r}: parse error {exc}")
    except CompileError as exc:
        print(f"{bad!r}: {exc}")
