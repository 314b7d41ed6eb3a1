"""
dirres - Resistance distances on directed graphs
"""

__version__ = "1.0.0"
__author__ = "dirres Team"

from src.config import Config

__all__ = ["Config"]
