"""Subword and vocabulary preparation toolkit for MT fine-tuning.

Learns and applies BPE segmentation, builds vocabularies from the D / E / D+E
data-source strategies, enumerates the supported fine-tuning configurations
(C1..C11), materializes prepared data packages for an external trainer, and
evaluates system outputs with BLEU, TER, and chrF2 plus paired bootstrap
significance testing.
"""

__version__ = "0.1.0"
