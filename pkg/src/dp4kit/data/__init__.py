"""Static tables shipped with the package."""
