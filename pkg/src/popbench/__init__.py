"""popbench: synthetic pop-out stimuli and saliency model benchmarking."""

__version__ = "0.1.0"
