# src/ide/__init__.py
