# Makes the repository root importable so the plots package tests can run
# from a plain checkout.
