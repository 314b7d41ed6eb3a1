"""Graph data sources: edge-list files and random generators."""
