from setuptools import setup, find_packages

setup(
    name = "gyrotop",
    version = "0.1.0",
    packages = find_packages(exclude=["tests", "docs", "benchmark"]),
    # Set the dependencies
    install_requires = ['numpy', 'matplotlib', 'mock'],
    entry_points = {
        'console_scripts': [
            'gyrotop = gyrotop.command:process'
    ]})
