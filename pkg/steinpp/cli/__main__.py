"""
Main entry point for CLI when run as module
"""

from .main import main

if __name__ == "__main__":
    main()
