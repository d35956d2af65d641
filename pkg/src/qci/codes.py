"""Built-in stabilizer code families and a text-format code parser.

Constructors return immutable StabilizerCode values with row-major qubit
numbering over their lattice.  Distance is attached as metadata by the
constructor; it is never recomputed from the operators.
"""

from __future__ import annotations

from .frame import CodeValidationError, StabilizerCode
from .paulis import PauliString


def repetition_code(d: int) -> StabilizerCode:
    """Z-basis repetition code on d qubits.

    Stabilizers are the adjacent-pair parities Z_i Z_{i+1}; the logical Z is
    Z on the last qubit and the logical X flips every qubit.
    """
    if d < 2:
        raise CodeValidationError(f"repetition code needs d >= 2, got {d}")
    stabs = tuple(
        PauliString(d, 0, (0b11 << i)) for i in range(d - 1)
    )
    logical_z = PauliString(d, 0, 1 << (d - 1))
    logical_x = PauliString(d, (1 << d) - 1, 0)
    return StabilizerCode(
        name=f"repetition-{d}",
        n=d,
        k=1,
        stabilizers=stabs,
        logical_x=(logical_x,),
        logical_z=(logical_z,),
        distance=d,
    )


def _check_odd_distance(d: int, family: str) -> None:
    if d < 3 or d % 2 == 0:
        raise CodeValidationError(f"{family} needs odd d >= 3, got {d}")


def rotated_surface_code(d: int) -> StabilizerCode:
    """Rotated surface code on a d x d grid of data qubits.

    Qubit (row, col) gets index row*d + col.  Bulk plaquettes are weight-4
    with X and Z types alternating in a checkerboard; weight-2 checks sit on
    the boundary.  The left and right boundaries carry the X-type weight-2
    checks, so the logical Z runs down the left column; the top and bottom
    boundaries carry Z-type checks and the logical X runs along the top row.
    """
    _check_odd_distance(d, "rotated surface code")
    x_faces: list[tuple[int, ...]] = []
    z_faces: list[tuple[int, ...]] = []
    q = lambda r, c: r * d + c
    for pr in range(d - 1):
        for pc in range(d - 1):
            face = (q(pr, pc), q(pr, pc + 1), q(pr + 1, pc), q(pr + 1, pc + 1))
            (x_faces if (pr + pc) % 2 == 0 else z_faces).append(face)
    for pc in range(0, d - 2, 2):
        z_faces.append((q(0, pc), q(0, pc + 1)))
    for pc in range(1, d - 1, 2):
        z_faces.append((q(d - 1, pc), q(d - 1, pc + 1)))
    for pr in range(1, d - 1, 2):
        x_faces.append((q(pr, 0), q(pr + 1, 0)))
    for pr in range(0, d - 2, 2):
        x_faces.append((q(pr, d - 1), q(pr + 1, d - 1)))

    n = d * d

    def x_op(sup: tuple[int, ...]) -> PauliString:
        bits = 0
        for i in sup:
            bits |= 1 << i
        return PauliString(n, bits, 0)

    def z_op(sup: tuple[int, ...]) -> PauliString:
        bits = 0
        for i in sup:
            bits |= 1 << i
        return PauliString(n, 0, bits)

    stabs = tuple(x_op(f) for f in x_faces) + tuple(z_op(f) for f in z_faces)
    logical_z = z_op(tuple(q(r, 0) for r in range(d)))
    logical_x = x_op(tuple(q(0, c) for c in range(d)))
    return StabilizerCode(
        name=f"surface-{d}",
        n=n,
        k=1,
        stabilizers=stabs,
        logical_x=(logical_x,),
        logical_z=(logical_z,),
        distance=d,
    )


def color_code_488(d: int) -> StabilizerCode:
    """Triangular color code on the square-octagon tiling.

    Every plaquette carries both an X and a Z stabilizer on the same
    support.  Qubits are numbered row-major over the drawing (top row first,
    left to right inside a row).  The lowest-weight logicals run along the
    diagonal boundary of the triangle; X and Z logicals share that support.
    """
    _check_odd_distance(d, "4.8.8 color code")
    verts, faces, logical_row = _triangle_patch_488(d)
    order = sorted(verts, key=lambda v: (-v[1], v[0]))
    index = {v: i for i, v in enumerate(order)}
    n = len(order)

    def bits(sup) -> int:
        b = 0
        for v in sup:
            b |= 1 << index[v]
        return b

    x_stabs = tuple(PauliString(n, bits(f), 0) for f in faces)
    z_stabs = tuple(PauliString(n, 0, bits(f)) for f in faces)
    logical_bits = bits(logical_row)
    return StabilizerCode(
        name=f"color488-{d}",
        n=n,
        k=1,
        stabilizers=x_stabs + z_stabs,
        logical_x=(PauliString(n, logical_bits, 0),),
        logical_z=(PauliString(n, 0, logical_bits),),
        distance=d,
    )


def _triangle_patch_488(d: int):
    """Vertices, plaquette supports, and the diagonal logical for distance d.

    The square-octagon tiling is drawn on an integer grid: square plaquettes
    are centered at (4i, 4j) with vertices one step away along the axes, and
    octagons are centered at (4a+2, 4b+2).  A distance-d triangle is the set
    of tiling vertices inside the region bounded below by y = -1, on the
    right by x = 5, along the diagonal by x - y = 5 - 4m with m = (d-1)/2,
    and past the apex by x + y = 4m + 3.  Plaquettes keep their surviving
    vertices; a cut keeps either 4 or 8 of them, so every check has weight
    4 or 8.  Octagon rows cut by the bottom edge and the column cut by the
    right edge retain only every other plaquette, because neighbours in
    those lines would share a single vertex and their checks would clash.
    """
    m = (d - 1) // 2
    lo = 5 - 4 * m

    def inside(x: int, y: int) -> bool:
        return y >= -1 and x <= 5 and x - y >= lo and x + y <= 4 * m + 3

    verts = [
        (x, y)
        for x in range(4 - 4 * m, 6)
        for y in range(-1, 4 * m)
        if ((x % 4 == 0 and y % 2) or (x % 2 and y % 4 == 0)) and inside(x, y)
    ]
    vset = set(verts)

    faces: list[tuple[tuple[int, int], ...]] = []
    for i in range(-m, 2):
        for j in range(-1, m + 1):
            cx, cy = 4 * i, 4 * j
            sq = ((cx, cy + 1), (cx + 1, cy), (cx, cy - 1), (cx - 1, cy))
            if all(v in vset for v in sq):
                faces.append(tuple(sorted(sq)))
    for a in range(-m, 2):
        for b in range(-1, m + 1):
            cx, cy = 4 * a + 2, 4 * b + 2
            oc = (
                (cx - 2, cy - 1), (cx - 2, cy + 1), (cx - 1, cy + 2),
                (cx + 1, cy + 2), (cx + 2, cy + 1), (cx + 2, cy - 1),
                (cx + 1, cy - 2), (cx - 1, cy - 2),
            )
            kept = tuple(sorted(v for v in oc if v in vset))
            if len(kept) == 8:
                faces.append(kept)
            elif len(kept) == 4:
                # alternation along the two straight-cut boundary lines
                if b == -1 and (a - (1 - m)) % 2:
                    continue
                if a == 1 and (b - m) % 2:
                    continue
                faces.append(kept)

    logical = [v for v in verts if v[0] - v[1] == lo]
    return verts, faces, logical


def parse_code_file(text: str, name: str = "file-code") -> StabilizerCode:
    """Parse the plain-text code format.

    Lines starting with '#' are comments.  The first data line is the header
    ``n <int> k <int>``; the rest are ``S <pauli>``, ``LX <pauli>`` or
    ``LZ <pauli>`` rows, each <pauli> a length-n string over I, X, Y, Z.
    """
    lines = [
        ln.strip() for ln in text.splitlines()
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines:
        raise ValueError("empty code file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "n" or head[2] != "k":
        raise ValueError(f"bad header line {lines[0]!r}, expected 'n <int> k <int>'")
    try:
        n, k = int(head[1]), int(head[3])
    except ValueError:
        raise ValueError(f"non-integer in header {lines[0]!r}") from None
    stabs: list[PauliString] = []
    logical_x: list[PauliString] = []
    logical_z: list[PauliString] = []
    sink = {"S": stabs, "LX": logical_x, "LZ": logical_z}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2 or parts[0] not in sink:
            raise ValueError(f"bad code file line {ln!r}")
        op = PauliString.from_text(parts[1])
        if op.n != n:
            raise ValueError(
                f"operator {parts[1]!r} acts on {op.n} qubits, header says n={n}"
            )
        sink[parts[0]].append(op)
    if n - len(stabs) != k:
        raise ValueError(
            f"header claims k={k} but n - (stabilizer count) = {n - len(stabs)}"
        )
    return StabilizerCode(
        name=name,
        n=n,
        k=k,
        stabilizers=tuple(stabs),
        logical_x=tuple(logical_x),
        logical_z=tuple(logical_z),
        distance=None,
    )


def single_qubit_code() -> StabilizerCode:
    """The bare qubit as a [[1,1,1]] code with an empty stabilizer group.

    Running the engine on this reproduces the unencoded baseline curves.
    """
    return StabilizerCode(
        name="single-qubit",
        n=1,
        k=1,
        stabilizers=(),
        logical_x=(PauliString(1, 1, 0),),
        logical_z=(PauliString(1, 0, 1),),
        distance=1,
    )


BUILTIN_FAMILIES = {
    "surface": rotated_surface_code,
    "color488": color_code_488,
    "repetition": repetition_code,
}
