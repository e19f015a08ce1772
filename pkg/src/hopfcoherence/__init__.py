"""Exact combinatorial Hopf algebra on words, Hopf-power Markov chains, and a
toy attention-only transformer trained on the Hopf-coherence defect."""

from .convolution import (CoherenceReport, LinMap, antipode_solve, coherence_check, conv_unit,
                          convolve, diagram_paths, linmap_apply)
from .errors import (AlphabetMismatch, BadArtifact, BadDimension, CorpusTooShort, DeckTooLarge,
                     DegreeCapExceeded, EmptyContext, HopfError, LengthMismatch, NoConvergence,
                     StructureMismatch, UnknownSymbol)
from .markov import (MarkovChain, Spectrum, hopf_power, repeated_square, riffle_chain,
                     spectrum_exact, stationary_by_squaring)
from .structures import HopfStructure, Kind, counit, unit
from .transformer import (Corpus, DefectTrace, ToyModel, bigram_fit, coherence_defect, model_init,
                          path_conv, path_unit, psd_check, qk_attention, train, update_step)
from .words import (Alphabet, Elem, TensorElem, coeff_of, elem_combine, grade_project, tensor_of,
                    word_parse)

__all__ = [
    "CoherenceReport", "LinMap", "antipode_solve", "coherence_check", "conv_unit", "convolve",
    "diagram_paths", "linmap_apply", "AlphabetMismatch", "BadArtifact", "BadDimension",
    "CorpusTooShort", "DeckTooLarge", "DegreeCapExceeded", "EmptyContext", "HopfError",
    "LengthMismatch", "NoConvergence", "StructureMismatch", "UnknownSymbol", "MarkovChain",
    "Spectrum", "hopf_power", "repeated_square", "riffle_chain", "spectrum_exact",
    "stationary_by_squaring", "HopfStructure", "Kind", "counit", "unit", "Corpus", "DefectTrace",
    "ToyModel", "bigram_fit", "coherence_defect", "model_init", "path_conv", "path_unit",
    "psd_check", "qk_attention", "train", "update_step", "Alphabet", "Elem", "TensorElem",
    "coeff_of", "elem_combine", "grade_project", "tensor_of", "word_parse",
]

__version__ = "0.1.0"
