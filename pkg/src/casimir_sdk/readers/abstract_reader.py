from abc import ABC, abstractmethod
from typing import Any


class AbstractReader(ABC):
    """
    Base class of the input readers. Readers are context managers, ``close()`` releases whatever ``read()`` opened.
    """

    @abstractmethod
    def read(self) -> Any:
        """
        Read and parse the whole source.
        @return: Parsed content, reader specific.
        """
        pass

    @abstractmethod
    def close(self):
        pass

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()
