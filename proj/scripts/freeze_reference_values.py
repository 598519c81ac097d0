"""Reference values frozen into the unit tests, computed with numpy only."""
import numpy as np
from scipy.special import logsumexp

X = np.array([[0, 1], [1, 0]], dtype=float)
Z = np.diag([1.0, -1.0])
I2 = np.eye(2)


def op_on(ops, n):
    out = np.ones((1, 1))
    for site in range(n):
        out = np.kron(out, ops.get(site, I2))
    return out


def tfim(n, g, periodic):
    bonds = n if periodic else n - 1
    h = sum(-op_on({i: Z, (i + 1) % n: Z}, n) for i in range(bonds))
    return h - g * sum(op_on({i: X}, n) for i in range(n))


def main():
    for n in (8, 10):
        e = np.linalg.eigvalsh(tfim(n, 1.0, True))
        for beta in (0.5, 1.0, 2.0):
            print(f"tfim periodic n={n} beta={beta}: log Z = {logsumexp(-beta * e):.17g}")
    # Open chain with the field split over bonds: h = -ZZ - (g/2)(X1 + 1X).
    n = 10
    bond = -np.kron(Z, Z) - 0.5 * (np.kron(X, I2) + np.kron(I2, X))
    h = sum(np.kron(np.kron(np.eye(2 ** i), bond), np.eye(2 ** (n - i - 2))) for i in range(n - 1))
    e = np.linalg.eigvalsh(h)
    print(f"tfim split-field open n={n} beta=1: log Z = {logsumexp(-e):.17g}")


if __name__ == "__main__":
    main()
