"""qkmech source package."""
