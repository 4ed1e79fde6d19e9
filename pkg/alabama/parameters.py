"""
Parameter handling for alabama.

There is one main parameter dictionary with multiple subdicts, read from an
INI file. The default subdict ("alabama") holds database settings which are
applied by `update_pars()`.
"""

import configparser
import os
import typing

import alabama
import alabama.utils
import alabama.exceptions


class Parameters(object):
    """
    Main class for parameters.
    """

    def __init__(self, default_dictname: str = "alabama"):
        """
        Creates parameters object, optionally setting default parameter dictionary name.
        """

        self.par_file = None
        self.par_dict = {}

        self.default_pardict_name = default_dictname

        alabama.db.parameters = self

    def read_parfile(self, parfilename: str | None = None) -> None:
        """
        Read a parameter file and create sub-dictionaries.

        Args:
            parfilename: Name of parameter file
        """

        if parfilename is None:
            parfilename = self.par_file
            if parfilename is None:
                alabama.exceptions.warning("Parameter file is not defined")
                return

        self.par_file = parfilename

        if not os.path.exists(parfilename):
            raise alabama.exceptions.InputError(f"Parameter file not found: {parfilename}")

        cp = configparser.ConfigParser(interpolation=None)
        try:
            cp.read(parfilename)
        except configparser.Error as e:
            raise alabama.exceptions.InputError(f"Bad parameter file {parfilename}: {e}")

        # sectionname & value case sensitive, name is not
        for sectionname in cp.sections():
            self.par_dict[sectionname] = {}
            for name, value in cp.items(sectionname):
                self.par_dict[sectionname][name.lower()] = value

        return

    def write_parfile(self, parfilename: str | None = None) -> None:
        """
        Writes par_dict to the par file.
        Does not update any values.

        Args:
            parfilename: Name of parameter file. None indicates use self.par_file

        Raises:
            FileNotFoundError: if parfilename not defined
        """

        if parfilename is None:
            parfilename = self.par_file
            if parfilename is None:
                raise FileNotFoundError("Parameter file is not defined")

        config = configparser.ConfigParser(interpolation=None)

        for sectionname in self.par_dict:
            config[sectionname] = {k: str(v) for k, v in self.par_dict[sectionname].items()}

        with open(parfilename, "w") as configfile:
            config.write(configfile)

        return

    def save_pars(self) -> None:
        """
        Writes the par_dict to the par_file using current values.
        """

        self.update_par_dict()
        self.write_parfile()

        return

    def update_pars(self) -> None:
        """
        Set current database attributes from default par_dict values.
        """

        par_dict = self.par_dict.get(self.default_pardict_name)
        if par_dict is None:
            return

        for parname, value in par_dict.items():
            self.set_par(parname, value)

        return

    def update_par_dict(self) -> None:
        """
        Set par_dict values in default par_dict from current database attributes.
        """

        par_dict = self.par_dict.setdefault(self.default_pardict_name, {})

        for parname in alabama.db.par_table:
            par_dict[parname] = self.get_par(parname)

        return

    def get_par(self, parameter: str, subdict: str | None = None) -> typing.Any:
        """
        Return the current value of a parameter.
        Parameters in the database parameter table are read from the database,
        others from the parameter dictionary.

        Args:
            parameter: name of the parameter
            subdict: name of the subdict containing the parameter

        Returns:
            value: value of the parameter
        """

        parameter = parameter.lower()

        if subdict is None:
            subdict = self.default_pardict_name

        attribute = alabama.db.par_table.get(parameter)
        if attribute is not None:
            return alabama.db.get(attribute)

        try:
            value = self.par_dict[subdict][parameter]
        except KeyError:
            alabama.exceptions.warning(f"Parameter {parameter} not available for get_par")
            return None

        return value

    def set_par(self, parameter: str, value: typing.Any = "None", subdict: str | None = None) -> None:
        """
        Set the value of a parameter.
        Database parameters are typed and set on the database.

        Args:
            parameter: name of the parameter
            value: value of the parameter
            subdict: subdict in which to set parameter
        """

        parameter = alabama.utils.dequote(parameter).lower()

        if subdict is None:
            subdict = self.default_pardict_name

        _, value = alabama.utils.get_datatype(value)

        self.par_dict.setdefault(subdict, {})[parameter] = value

        attribute = alabama.db.par_table.get(parameter)
        if attribute is None:
            return

        current = alabama.db.get(attribute)
        if isinstance(current, int) and not isinstance(value, int):
            if isinstance(value, float) and value.is_integer():
                value = int(value)
            else:
                raise alabama.exceptions.InputError(f"Parameter {parameter} must be an integer")
        elif isinstance(current, float) and isinstance(value, int):
            value = float(value)
        elif isinstance(current, str):
            value = str(value)

        alabama.db.set(attribute, value)

        return
