"""Small helpers shared by the search, the evaluation harness and the CLI.
"""

import numpy as np


def jaccard(a, b):
    """Jaccard similarity of two boolean masks over the same instances.

    >>> import numpy as np
    >>> a = np.array([True, True, False, False])
    >>> b = np.array([True, False, True, False])
    >>> jaccard(a, b)
    0.3333333333333333
    >>> jaccard(a, a)
    1.0

    Two empty sets are identical:

    >>> jaccard(np.zeros(3, bool), np.zeros(3, bool))
    1.0
    """
    union = np.count_nonzero(a | b)
    if union == 0:
        return 1.0
    return np.count_nonzero(a & b) / float(union)


def first_appearance(values):
    """Distinct values in the order they first appear.

    >>> first_appearance(['b', 'a', 'b', 'c', 'a'])
    ['b', 'a', 'c']
    """
    seen = {}
    for value in values:
        if value not in seen:
            seen[value] = len(seen)
    return list(seen)


def parse_int_list(text):
    """Parse a comma separated list of positive integers.

    >>> parse_int_list('10,30, 50')
    (10, 30, 50)
    >>> parse_int_list('10,,x')
    Traceback (most recent call last):
    ...
    ValueError: not a list of positive integers: '10,,x'
    """
    try:
        values = tuple(int(item) for item in text.split(','))
    except ValueError:
        values = ()
    if not values or min(values) < 1:
        raise ValueError('not a list of positive integers: %r' % text)
    return values


def parse_name_list(text):
    """Parse a comma separated list of column names.

    >>> parse_name_list('color, shape,')
    ['color', 'shape']
    >>> parse_name_list('')
    []
    """
    return [item.strip() for item in (text or '').split(',') if item.strip()]


def condition_key(condition):
    """Order independent key of a conjunction of literals."""
    return tuple(sorted(literal.key() for literal in condition))
