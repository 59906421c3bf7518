# FDpy: distance functions over finite point sets in R^3.
# License: GNU-GPL Style.

import sys

import numpy as np
from scipy import linalg

RANK_RTOL = 1e-12
# -----------------------------------------------------------------------------------------------------------


class Col(object):
    """
    This class is defined to ouput a word or sentence in a different color
    to the standard shell.
    The colors available are:
    ``pink``, ``blue``, ``green``, ``dgrn``: dark green, ``yel``, ``amber``

    Colors are dropped when ``enabled`` is False (e.g. output redirected
    to a file).
    """
    codes = {
        'pink': '\033[95m',
        'blue': '\033[94m',
        'green': '\033[92m',
        'dgrn': '\033[1;32m',
        'yel': '\033[93m',
        'amber': '\033[91m',
    }
    ENDC = '\033[0m'

    def __init__(self, enabled=None, stream=None):
        self.stream = stream if stream is not None else sys.stdout
        if enabled is None:
            enabled = hasattr(self.stream, 'isatty') and self.stream.isatty()
        self.enabled = enabled

    def c_str(self, text, color):
        """
        Wrap ``text`` in the escape codes of ``color``.

        Parameters
        ----------
        text: string
            Text to be shown in color.

        color: string
            One of the keys of ``Col.codes``.

        Returns
        --------
        string
        """
        if color not in self.codes:
            raise ValueError('The color you selected is not acceptable: %r' % (color,))
        if not self.enabled:
            return text
        return self.codes[color] + text + self.ENDC

    def c_prnt(self, text, color):
        """Print a string in color."""
        print(self.c_str(text, color), file=self.stream)
# -----------------------------------------------------------------------------------------------------------


def check_display(cond, number, message, col=None, echo=False):
    """
    One numbered check line, ``number . message -> YES`` or
    ``-> <<<Violated>>>``, as printed by the audit report.

    Parameters
    ----------
    cond: bool

    number: int

    message: string

    col: Col, optional
        Color printer; plain text without it.

    echo: bool
        Also print the line to ``col.stream`` (stdout without ``col``).

    Returns
    -------
    string
    """
    txt = col if col is not None else Col(enabled=False)
    status = txt.c_str('YES', 'yel') if cond else txt.c_str('<<<Violated>>>', 'amber')
    line = '%s . %s -> %s' % (number, message, status)
    if echo:
        print(line, file=txt.stream)
    return line
# -----------------------------------------------------------------------------------------------------------


def numerical_rank(mat, rtol=RANK_RTOL):
    """
    Numerical rank from singular values.

    Parameters
    ----------
    mat: numpy array
        (m x n) matrix, possibly with m == 0 or n == 0.

    rtol: float
        Relative tolerance; singular values at or below
        ``sigma_max * max(m, n) * rtol`` count as zero.

    Returns
    -------
    rank: int

    sv: numpy array
        The singular values in descending order.
    """
    mat = np.asarray(mat, dtype=float)
    if mat.size == 0:
        return 0, np.zeros(0)
    sv = linalg.svdvals(mat)
    if sv[0] == 0.0:
        return 0, sv
    tol = sv[0] * max(mat.shape) * rtol
    return int(np.sum(sv > tol)), sv
# -----------------------------------------------------------------------------------------------------------


def equilibrate_columns(mat):
    """
    Column scale factors making every nonzero column of ``mat`` unit norm.
    Returns (scaled matrix, scale vector); zero columns keep scale 1.
    """
    mat = np.asarray(mat, dtype=float)
    norms = np.sqrt(np.sum(mat**2, axis=0)) if mat.shape[0] else np.zeros(mat.shape[1])
    scale = np.where(norms > 0, 1.0/np.where(norms > 0, norms, 1.0), 1.0)
    return mat*scale, scale
# -----------------------------------------------------------------------------------------------------------


def pair_seed(master_seed, i, j):
    """
    Deterministic seed for the unordered pair (i, j) derived from
    ``master_seed``; identical whichever worker computes the pair.
    """
    lo, hi = (i, j) if i <= j else (j, i)
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(lo), int(hi)))
    return int(ss.generate_state(1, dtype=np.uint32)[0])
# -----------------------------------------------------------------------------------------------------------


def fmt17(val):
    """Shortest-safe text for a float: 17 significant digits, '.' separator."""
    val = float(val)
    if np.isnan(val):
        return 'nan'
    if np.isinf(val):
        return 'inf' if val > 0 else '-inf'
    return '%.17g' % val
