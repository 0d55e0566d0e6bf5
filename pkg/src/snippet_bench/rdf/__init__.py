from .dataset import (
    MATCH_MODES,
    Dataset,
    Query,
    Snippet,
    class_frequency,
    covers,
    degrees,
    entities,
    load_ntriples,
    parse_ntriples,
    property_frequency,
    text_forms,
)
from .ntriples import NTriplesSyntaxError, ParseReport, parse_term, serialize_ntriples
from .terms import (
    BNODE,
    IRI,
    LITERAL,
    RDF_TYPE,
    RDFS_LABEL,
    DomainError,
    Term,
    Triple,
    bnode,
    iri,
    literal,
)
from .text import local_name, tokenize
