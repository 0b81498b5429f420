"""Parser for chord-algebra expressions.

Grammar (whitespace ignored):

    expr      := term (('+' | '-') term)*
    term      := factor ('*' factor)*
    factor    := rational | generator | '[' expr ',' expr ']'
               | '(' expr ')' | '-' factor
    rational  := integer ('/' integer)?
    generator := 'X' digit digit (':' word)?      e.g. X12, X13:abA

Strand labels are single digits (n <= 9).  The ':word' suffix is only
accepted in decorated mode, with words over a-z (inverses A-Z) or 'e'.
Parse errors report the character position.
"""

from fractions import Fraction

from .algebra import AlgebraElement, bracket
from .decorated import DecoratedElement, commutator, parse_word


class _ParseError(ValueError):
    pass


def _error(pos, message):
    raise _ParseError(f"parse error at position {pos}: {message}")


class _Parser:
    def __init__(self, text, make_generator, make_scalar, make_bracket):
        self.text = text
        self.pos = 0
        self.generator = make_generator
        self.scalar = make_scalar
        self.bracket = make_bracket

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            _error(self.pos, f"expected {ch!r}")
        self.pos += 1

    def parse(self):
        value = self.parse_expr()
        self.skip_ws()
        if self.pos != len(self.text):
            _error(self.pos, f"unexpected {self.text[self.pos]!r}")
        return value

    def parse_expr(self):
        value = self.parse_term()
        while self.peek() in ("+", "-"):
            op = self.peek()
            self.pos += 1
            rhs = self.parse_term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def parse_term(self):
        value = self.parse_factor()
        while self.peek() == "*":
            self.pos += 1
            value = value * self.parse_factor()
        return value

    def parse_factor(self):
        ch = self.peek()
        if ch == "-":
            self.pos += 1
            return (-1) * self.parse_factor()
        if ch == "(":
            self.pos += 1
            value = self.parse_expr()
            self.expect(")")
            return value
        if ch == "[":
            self.pos += 1
            a = self.parse_expr()
            self.expect(",")
            b = self.parse_expr()
            self.expect("]")
            return self.bracket(a, b)
        if ch == "X":
            return self.parse_generator()
        if ch.isdigit():
            return self.scalar(self.parse_rational())
        _error(self.pos, "expected a generator, scalar, bracket or parenthesis")

    def parse_integer(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            _error(start, "expected an integer")
        return int(self.text[start:self.pos])

    def parse_rational(self):
        num = self.parse_integer()
        if self.peek() == "/":
            self.pos += 1
            den = self.parse_integer()
            if den == 0:
                _error(self.pos, "zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    def parse_generator(self):
        self.expect("X")
        pos = self.pos
        if self.pos + 2 > len(self.text) or not self.text[self.pos:self.pos + 2].isdigit():
            _error(pos, "expected two strand digits after X")
        i, j = int(self.text[self.pos]), int(self.text[self.pos + 1])
        self.pos += 2
        word = None
        if self.pos < len(self.text) and self.text[self.pos] == ":":
            self.pos += 1
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isalpha():
                self.pos += 1
            if start == self.pos:
                _error(start, "expected a word after ':'")
            word = self.text[start:self.pos]
        try:
            return self.generator(i, j, word, pos)
        except ValueError as exc:
            _error(pos, str(exc))


def parse_element(text, n, parity):
    """Parse an undecorated expression into an AlgebraElement."""

    def make_generator(i, j, word, pos):
        if word is not None:
            raise ValueError("decorations are not allowed here; use decorated-nf")
        return AlgebraElement.generator(n, parity, i, j)

    def make_scalar(q):
        return q * AlgebraElement.unit(n, parity)

    return _Parser(text, make_generator, make_scalar, bracket).parse()


def parse_decorated_element(text, n, rank):
    """Parse a decorated expression into a DecoratedElement."""

    def make_generator(i, j, word, pos):
        gamma = parse_word(word) if word is not None else ()
        return DecoratedElement.generator(n, rank, i, j, gamma)

    def make_scalar(q):
        return q * DecoratedElement.unit(n, rank)

    return _Parser(text, make_generator, make_scalar, commutator).parse()


GRAMMAR_HELP = __doc__
