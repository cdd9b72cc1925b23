"""planelab: verify/search pipelines for six open problems of plane geometry."""

__version__ = "0.1.0"
