"""webbduck tests package."""
