import setuptools
import versioneer

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name="blind_deconv",
    version=versioneer.get_version(),
    cmdclass=versioneer.get_cmdclass(),
    author="blind_deconv folks",
    author_email="",
    description="Blind deconvolution by low-rank recovery of the lifted matrix",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=['tests']),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    python_requires='>=3.8',
    install_requires=['numpy>=1.17.0', 'pillow>=6.0.0', 'PyWavelets>=1.1.0',
                      'joblib>=0.14.0'],
    extras_require={'test': ['pytest>=6.0']},
    entry_points={'console_scripts':
                    ['deconv=blind_deconv.cli:main']},
    package_data={"blind_deconv": ["config/run_config_template.ini"]}
)
