"""Printed N=4 matrices, as order-4 exponents: 0 -> 1, 1 -> i, 2 -> -1, 3 -> -i."""

H4 = [
    [[0, 0, 0, 0], [0, 2, 0, 2], [0, 0, 2, 2], [0, 2, 2, 0]],
    [[0, 0, 0, 0], [3, 1, 3, 1], [1, 1, 3, 3], [0, 2, 2, 0]],
    [[0, 0, 0, 0], [2, 0, 2, 0], [3, 3, 1, 1], [3, 1, 1, 3]],
    [[0, 0, 0, 0], [1, 3, 1, 3], [2, 2, 0, 0], [1, 3, 3, 1]],
]
A4 = [[0, 0, 0, 0], [0, 3, 1, 0], [0, 2, 3, 3], [0, 1, 2, 1]]

# printed qubit Wigner basis signs (c_x, c_y, c_z) at each phase-space point
QUBIT_SIGNS = {(0, 0): (1, 1, 1), (0, 1): (-1, -1, 1), (1, 0): (1, -1, -1), (1, 1): (-1, 1, -1)}

# GF(4) addition and multiplication written out by hand (labels 0, 1, x, x + 1)
GF4_ADD = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]
GF4_MUL = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]]


def gf4_k_grid(i):
    """k = i m + n over GF(4), or m for i = 4; indexed grid[n][m]."""
    return [[m if i == 4 else GF4_ADD[GF4_MUL[i][m]][n] for m in range(4)] for n in range(4)]

# complementary partners of the twelve period-6 generators of the mod-6 ring
RING6_PARTNERS = {
    "X": [1, 5, 6, 7, 9, 10], "XZ": [0, 2, 6, 7, 8, 11], "XZ^2": [1, 3, 6, 8, 9, 10],
    "XZ^3": [2, 4, 6, 7, 9, 11], "XZ^4": [3, 5, 6, 7, 8, 10], "XZ^5": [0, 4, 6, 8, 9, 11],
    "Z": [0, 1, 2, 3, 4, 5], "X^2Z": [0, 1, 3, 4, 10, 11], "X^2Z^3": [1, 2, 4, 5, 10, 11],
    "X^2Z^5": [0, 2, 3, 5, 10, 11], "X^3Z": [0, 2, 4, 7, 8, 9], "X^3Z^2": [1, 3, 5, 7, 8, 9],
}
