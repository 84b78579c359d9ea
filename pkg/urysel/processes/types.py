"""Type expressions over base variables V1, V2, ...

Grammar::

    type := term ['->' type]            (arrows associate to the right)
    term := 'V' digits | '(' type {',' type} ')'

A parenthesized list of two or more types is a product.
"""

import re
from dataclasses import dataclass

from urysel.exceptions import TypeSyntaxError

_TOKEN = re.compile(r'\s*(?:(V\d+)|(->)|([(),]))')


class TypeExpr(object):
    def variables(self):
        raise NotImplementedError()


@dataclass(frozen=True)
class Base(TypeExpr):
    index: int

    def variables(self):
        return {self.index}

    def __str__(self):
        return 'V{}'.format(self.index)


@dataclass(frozen=True)
class Arrow(TypeExpr):
    domain: TypeExpr
    codomain: TypeExpr

    def variables(self):
        return self.domain.variables() | self.codomain.variables()

    def __str__(self):
        return '({}->{})'.format(self.domain, self.codomain)


@dataclass(frozen=True)
class Product(TypeExpr):
    factors: tuple

    def variables(self):
        found = set()
        for factor in self.factors:
            found |= factor.variables()
        return found

    def __str__(self):
        return '({})'.format(','.join(str(f) for f in self.factors))


def _tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            raise TypeSyntaxError(text, pos, 'V<digits>, ->, (, ) or ,')
        tokens.append((match.group(match.lastindex), match.start(match.lastindex)))
        pos = match.end()
    return tokens


class _Parser(object):
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def _peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][0]
        return None

    def _where(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][1]
        return len(self.text)

    def _take(self, expected):
        if self._peek() != expected:
            raise TypeSyntaxError(self.text, self._where(), repr(expected))
        self.pos += 1

    def parse(self):
        expr = self._type()
        if self._peek() is not None:
            raise TypeSyntaxError(self.text, self._where(), 'end of input')
        return expr

    def _type(self):
        term = self._term()
        if self._peek() == '->':
            self.pos += 1
            return Arrow(term, self._type())
        return term

    def _term(self):
        token = self._peek()
        if token is None:
            raise TypeSyntaxError(self.text, self._where(), 'a type')
        if token.startswith('V'):
            self.pos += 1
            return Base(int(token[1:]))
        if token == '(':
            self.pos += 1
            items = [self._type()]
            while self._peek() == ',':
                self.pos += 1
                items.append(self._type())
            self._take(')')
            if len(items) == 1:
                return items[0]
            return Product(tuple(items))
        raise TypeSyntaxError(self.text, self._where(), 'V<digits> or (')


def parse_type(text):
    """Parse a type expression, e.g. ``(V1,V2)->V1``."""
    return _Parser(text).parse()


def _factors(expr):
    return expr.factors if isinstance(expr, Product) else (expr,)


def uncurry(expr):
    """Normal form where every arrow targets a base type or a product.

    s -> (t -> r) becomes (s, t) -> r, domains are normalized recursively.
    """
    if isinstance(expr, Base):
        return expr
    if isinstance(expr, Product):
        return Product(tuple(uncurry(f) for f in expr.factors))
    domain = uncurry(expr.domain)
    codomain = uncurry(expr.codomain)
    if isinstance(codomain, Arrow):
        factors = _factors(domain) + _factors(codomain.domain)
        return Arrow(Product(factors), codomain.codomain)

    return Arrow(domain, codomain)
