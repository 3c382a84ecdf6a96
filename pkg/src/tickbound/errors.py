"""Exception types raised by tickbound."""


class TdesError(Exception):
    """Base class for all tickbound errors."""


class AlphabetMismatch(TdesError, ValueError):
    """Two automata were combined over different event tables."""


class LanguageNotContained(TdesError, ValueError):
    """A candidate language is not contained in the plant language."""


class NotActivityLoopFree(TdesError, ValueError):
    """The automaton has a cycle made only of activity events."""


class EmptyClassError(TdesError, ValueError):
    """A marker-cover class resolved to no states."""


class ParseError(TdesError, ValueError):
    """Syntax or semantic error in one of the text formats."""

    def __init__(self, message, line=None, column=None, source=None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
            if column is not None:
                where += f"{column}:"
        super().__init__(f"{where} {message}" if where else message)
