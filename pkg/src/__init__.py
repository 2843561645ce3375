"""
GEPNet Turbo Receiver Laboratory
"""

__version__ = "1.0.0"
__author__ = "Receiver Simulation Team"
__description__ = "Desk-scale simulation lab for GNN-enhanced EP detection in MIMO turbo receivers"
