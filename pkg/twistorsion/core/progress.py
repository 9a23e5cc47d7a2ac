"""tqdm progress helpers for batch drivers."""

import sys
from typing import Iterable, Optional

from tqdm import tqdm

_BAR_FORMAT = '{l_bar}{bar}| {n_fmt}/{total_fmt} ({elapsed}<{remaining})'


def pbar(
    it: Iterable,
    total: Optional[int] = None,
    desc: Optional[str] = None,
    verbose: bool = True,
    ncols: int = 80,
):
    """
    Iterate with an optional progress bar on stderr.

    Args:
        it: The iterable to loop over
        total: Number of items, if it cannot be inferred
        desc: Label shown left of the bar
        verbose: When False the iterable is returned unchanged
        ncols: Width of the bar
    """
    if not verbose:
        return it
    return tqdm(
        it,
        total=total,
        desc=desc,
        ncols=ncols,
        leave=False,
        file=sys.stderr,
        bar_format=_BAR_FORMAT,
    )
