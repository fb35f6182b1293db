from .client import ChatClient, HttpChatClient, ReplayClient, TranscriptCache, exchange_digest, write_exchange
from .extraction import ExtractionResult, Transcript, run_extraction
from .parsing import ParseWarning, Statement, format_edges, parse_edge_statements, parse_revision
from .prompts import PromptBundle, build_prompts

__all__ = [
    "ChatClient",
    "HttpChatClient",
    "ReplayClient",
    "TranscriptCache",
    "exchange_digest",
    "write_exchange",
    "ExtractionResult",
    "Transcript",
    "run_extraction",
    "ParseWarning",
    "Statement",
    "format_edges",
    "parse_edge_statements",
    "parse_revision",
    "PromptBundle",
    "build_prompts",
]
