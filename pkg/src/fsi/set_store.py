"""Storage for a collection of integer sets with O(1) membership in both directions.

The collection is immutable after construction: per-set hash tables answer
"is x in set i" and an inverse table answers "which sets contain x".
"""

from __future__ import annotations

from .errors import ParseError, ValidationError


class SetCollection:
    """m integer sets over an unsigned-id universe, with two-way lookup tables.

    Attributes:
        sets: list of ascending, duplicate-free element lists, one per set.
        total_size: sum of all set cardinalities (N).
        universe_bound: largest element id present (0 for an empty collection).
    """

    def __init__(self, sets, dedupe=False):
        self.sets = []
        for i, raw in enumerate(sets):
            elems = list(raw)
            for x in elems:
                if not isinstance(x, int) or x < 0:
                    raise ValidationError(
                        "set %d: element %r is not an unsigned integer" % (i, x)
                    )
            uniq = sorted(set(elems))
            if len(uniq) != len(elems):
                if not dedupe:
                    dup = _first_duplicate(elems)
                    raise ValidationError(
                        "set %d contains duplicate element %d (pass dedupe to sanitize)"
                        % (i, dup)
                    )
            self.sets.append(uniq)
        self.total_size = sum(len(s) for s in self.sets)
        self.universe_bound = max((s[-1] for s in self.sets if s), default=0)
        self._member = [frozenset(s) for s in self.sets]
        inverse = {}
        for i, s in enumerate(self.sets):
            for x in s:
                inverse.setdefault(x, []).append(i)
        self._inverse = inverse

    @property
    def m(self):
        return len(self.sets)

    def member_table(self, set_id):
        """The hash table of one set, for repeated membership probes."""
        self._check_id(set_id)
        return self._member[set_id]

    def membership(self, set_id, x):
        """True iff element x belongs to set set_id."""
        self._check_id(set_id)
        return x in self._member[set_id]

    def sets_of(self, x):
        """Ascending ids of every set containing x (empty if x is absent)."""
        return list(self._inverse.get(x, ()))

    def serialize(self):
        """Render back to the sets file format (one space-separated set per line)."""
        return "".join(" ".join(str(x) for x in s) + "\n" for s in self.sets)

    def _check_id(self, set_id):
        if not 0 <= set_id < len(self.sets):
            raise IndexError("set id %d out of range (m=%d)" % (set_id, len(self.sets)))


def _first_duplicate(elems):
    seen = set()
    for x in elems:
        if x in seen:
            return x
        seen.add(x)
    return None


def load_sets(source, dedupe=False):
    """Parse the sets file format into a SetCollection.

    One set per line, base-10 unsigned elements separated by single spaces,
    blank line = empty set. `source` may be text, bytes, or a file-like object.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    sets = []
    for lineno, line in enumerate(source.splitlines(), start=1):
        if line == "":
            sets.append([])
            continue
        elems = []
        for tok in line.split(" "):
            if not tok.isdigit():
                raise ParseError("line %d: bad element %r" % (lineno, tok))
            elems.append(int(tok))
        sets.append(elems)
    return SetCollection(sets, dedupe=dedupe)
