"""Entry point for running the command line."""

from leveltrees.main import main

if __name__ == "__main__":
    main()
