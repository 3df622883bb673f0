# modes/base.py

from abc import ABC, abstractmethod


class PipelineMode(ABC):
    """
    One way of turning an analysed curve into its final disk.
    """

    @abstractmethod
    def can_run(self, analysis, config) -> bool:
        pass

    @abstractmethod
    def run(self, result):
        pass
