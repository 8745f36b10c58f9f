"""Independent reference computations used to freeze expected values."""
import numpy as np


def toeplitz_eigs(n, diag=8.0, off=-1.0):
    """Closed-form eigenvalues of the symmetric tridiagonal Toeplitz matrix."""
    k = np.arange(1, n + 1)
    return diag + 2.0 * abs(off) * np.cos(k * np.pi / (n + 1))
