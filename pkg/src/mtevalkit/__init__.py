"""Translationese-aware machine translation evaluation toolkit.

Partitioned test suites (source-original vs. target-original), 13a
tokenization, corpus/sentence BLEU and TER, Kneser-Ney n-gram language
models for fluency scoring, human direct-assessment aggregation, and
bootstrap/sign-test significance statistics. See the `cli` module or the
`mtevalkit` console script for the command-line surface.
"""

__version__ = "0.1.0"

from .corpus import (
    BitextPair,
    FilterReport,
    OverlapReport,
    Segment,
    SystemOutput,
    TestSuite,
    TestSuiteItem,
    disjointness_report,
    filter_bitext,
    load_suite,
    script_predicate,
)
from .errors import (
    AlignmentError,
    DegenerateInputError,
    LoadError,
    MtevalkitError,
    ScoringError,
    ValidationError,
)
from .humaneval import (
    Judgement,
    PairwisePreference,
    SystemScore,
    aggregate_system_scores,
    flag_low_agreement,
    read_judgements_tsv,
    sign_test_pairwise,
    z_normalize,
)
from .lm import (
    CountTable,
    FluencyReport,
    NGramModel,
    PerplexityReport,
    count_ngrams,
    estimate_kn,
    fluency_compare,
    perplexity,
    train_model,
)
from .metrics import (
    KERNEL_BACKEND,
    BleuReport,
    BleuStats,
    DeltaTable,
    TerReport,
    bleu_score,
    bleu_stats,
    corpus_bleu,
    delta_table,
    levenshtein,
    sentence_bleu,
    ter,
    ter_exhaustive,
)
from .significance import (
    DEFAULT_SEED,
    BootstrapResult,
    bleu_scorer,
    fisher_interval,
    mean_scorer,
    paired_bootstrap,
    pearson_fisher_ci,
)
from .tokenizer import TokenSequence, tok13a
