#!/usr/bin/env python
__import__("setuptools").setup()
