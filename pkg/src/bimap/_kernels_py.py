"""Pure-Python LCS kernels, used when the compiled extension is unavailable."""


def lcs_length(a: str, b: str) -> int:
    if len(b) > len(a):
        a, b = b, a
    row = [0] * (len(b) + 1)
    for ca in a:
        diag = 0
        for j, cb in enumerate(b):
            up = row[j + 1]
            if ca == cb:
                row[j + 1] = diag + 1
            elif row[j] > up:
                row[j + 1] = row[j]
            diag = up
    return row[-1]


def lcsr_exceeds(a: str, b: str, threshold: float) -> bool:
    hi = max(len(a), len(b))
    if hi == 0 or min(len(a), len(b)) <= threshold * hi:
        return False
    return lcs_length(a, b) > threshold * hi


def cognate_matrix(xs: list, ys: list, threshold: float) -> bytearray:
    """Row-major bytearray ``M[i * len(ys) + j] = lcsr(xs[i], ys[j]) > threshold``."""
    ny = len(ys)
    out = bytearray(len(xs) * ny)
    for i, a in enumerate(xs):
        base = i * ny
        for j, b in enumerate(ys):
            if lcsr_exceeds(a, b, threshold):
                out[base + j] = 1
    return out
